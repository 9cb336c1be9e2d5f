//! One function per subcommand. Each returns a finished [`Report`] whose
//! exit code follows the contract: 0 for the positive outcome, 2 for the
//! negative one, 3 when the evidence is inconclusive.

use anyhow::Result;
use bmoa_core::bmoa::{arc_seminorm, carleson_seminorm, seminorm, Route, SeminormProfile};
use bmoa_core::hardy::gamma_boundary_unchecked;
use bmoa_core::operators::{alpha_beta_profile, assess, AlphaBetaProfile, SymbolPair, ThresholdMax, Verdict, VerdictKind};
use bmoa_core::weights::{check_admissibility, Trend, Verdict as Admissibility};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::config::{Resolved, RunConfig};
use crate::report::{round12, Cell, Report, Table};
use crate::suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

fn point(z: Complex64) -> String {
    bmoa_core::grammar::format_complex(Complex64::new(round12(z.re), round12(z.im)))
}

pub fn admissible(cfg: &RunConfig, res: &Resolved) -> Result<Report> {
    let w = &res.weight;
    let rep = check_admissibility(w);
    let hinf = w.hinf_embedding()?;
    let mut r = Report::new("admissible", cfg);
    r.note("weight", rep.weight.as_str());
    r.note("eps0", rep.eps0);
    r.note("verdict", serde_json::to_value(rep.verdict)?.as_str().unwrap_or_default().to_string());
    r.note("bounded_embedding", serde_json::to_value(hinf.status)?.as_str().unwrap_or_default().to_string());
    r.note("eval_norm_limit", hinf.limit);
    let mut t = Table::new("conditions", &["condition", "estimate", "log_estimate", "classification", "witness", "secondary", "note"]);
    for c in &rep.conditions {
        let witness: Vec<String> = c.witness.iter().map(|x| crate::report::fmt_num(*x)).collect();
        t.push(vec![
            serde_json::to_value(c.condition)?.as_str().unwrap_or_default().into(),
            c.estimate.into(),
            c.log_estimate.into(),
            serde_json::to_value(c.classification)?.as_str().unwrap_or_default().into(),
            witness.join(" ").into(),
            c.secondary.into(),
            c.note.as_str().into(),
        ]);
    }
    r.tables.push(t);
    r.exit_code = match rep.verdict {
        Admissibility::Admissible => EXIT_OK,
        Admissibility::NotAdmissible => EXIT_NEGATIVE,
        Admissibility::Inconclusive => EXIT_INCONCLUSIVE,
    };
    r.result = Some(json!({ "admissibility": rep, "bounded_embedding": hinf }));
    if hinf.status == Trend::Inconclusive {
        r.note("embedding_note", "h-growth test inconclusive");
    }
    Ok(r)
}

pub fn seminorm_cmd(cfg: &RunConfig, res: &Resolved) -> Result<Report> {
    let f = res.require(&res.f, "f")?;
    let mut r = Report::new("seminorm", cfg);
    r.note("f", f.to_string());
    r.note("weight", res.weight.to_string());
    let mut t = Table::new("levels", &["route", "p", "level", "radius", "max", "witness_angle"]);
    let mut profiles: Vec<SeminormProfile> = Vec::new();
    for route in &res.routes {
        let prof = match route {
            Route::Garsia => seminorm(f, &res.weight, res.p, &res.grid, &res.quad)?,
            Route::Carleson => carleson_seminorm(f, &res.weight, &res.grid, &res.quad)?,
            Route::Arc => arc_seminorm(f, &res.weight, res.p, &res.arcs, &res.quad)?,
        };
        r.note(&format!("{route}.sup"), prof.sup);
        r.note(&format!("{route}.witness"), point(prof.witness));
        r.note(&format!("{route}.norm"), prof.norm);
        r.note(&format!("{route}.tail"), prof.tail.to_string());
        r.note(&format!("{route}.tail_slope"), prof.tail_slope);
        for l in &prof.levels {
            t.push(vec![route.to_string().into(), prof.p.to_string().into(), l.level.into(), l.radius.into(), l.max.into(), l.witness_angle.into()]);
        }
        profiles.push(prof);
    }
    r.tables.push(t);
    r.result = Some(serde_json::to_value(&profiles)?);
    Ok(r)
}

fn pair(res: &Resolved) -> Result<SymbolPair> {
    let psi = res.require(&res.psi, "psi")?;
    let phi = res.require(&res.phi, "phi")?;
    Ok(SymbolPair::new(psi.clone(), phi.clone())?)
}

fn threshold_table(ts: &[ThresholdMax]) -> Table {
    let mut t = Table::new("thresholds", &["threshold", "count", "alpha", "beta", "total", "witness"]);
    for x in ts {
        t.push(vec![x.threshold.into(), x.count.into(), x.alpha.into(), x.beta.into(), x.total.into(), x.witness.map(point).unwrap_or_default().into()]);
    }
    t
}

fn profile_summary(r: &mut Report, p: &AlphaBetaProfile) {
    r.note("sup_alpha", p.sup_alpha);
    r.note("sup_beta", p.sup_beta);
    r.note("sup_beta_p2", p.sup_beta_two);
    r.note("witness_alpha", point(p.witness_alpha));
    r.note("witness_beta", point(p.witness_beta));
    r.note("norm_estimate", p.norm_estimate);
    r.note("phi_sup", p.phi_sup);
    r.note("failed_rows", p.failed);
}

pub fn alphabeta(cfg: &RunConfig, res: &Resolved) -> Result<Report> {
    let pair = pair(res)?;
    let prof = alpha_beta_profile(&pair, &res.weight, &res.grid, &res.quad)?;
    let mut r = Report::new("alphabeta", cfg);
    profile_summary(&mut r, &prof);
    let mut t = Table::new("rows", &["re", "im", "level", "phi_abs", "alpha", "beta", "beta_p2", "error"]);
    for row in &prof.rows {
        t.push(vec![
            row.point.re.into(),
            row.point.im.into(),
            row.level.into(),
            row.phi_abs.into(),
            row.alpha.into(),
            row.beta.into(),
            row.beta_two.into(),
            row.error.clone().unwrap_or_default().into(),
        ]);
    }
    r.tables.push(t);
    r.tables.push(threshold_table(&prof.thresholds));
    r.result = Some(serde_json::to_value(&prof)?);
    Ok(r)
}

fn verdict_report(cfg: &RunConfig, command: &str, v: &Verdict, prof: &AlphaBetaProfile, positive: VerdictKind, negative: VerdictKind) -> Result<Report> {
    let mut r = Report::new(command, cfg);
    r.note("verdict", v.kind.to_string());
    r.note("estimate", v.estimate);
    r.note("limsup", v.limsup);
    r.note("witnesses", v.witnesses.iter().map(|z| point(*z)).collect::<Vec<_>>().join(" "));
    for (k, d) in &v.diagnostics {
        r.note(&format!("diagnostics.{k}"), d.as_str());
    }
    profile_summary(&mut r, prof);
    r.tables.push(threshold_table(&v.thresholds));
    r.exit_code = if v.kind == positive {
        EXIT_OK
    } else if v.kind == negative {
        EXIT_NEGATIVE
    } else {
        EXIT_INCONCLUSIVE
    };
    r.result = Some(serde_json::to_value(v)?);
    Ok(r)
}

pub fn bounded(cfg: &RunConfig, res: &Resolved) -> Result<Report> {
    let a = assess(&pair(res)?, &res.weight, &res.grid, &res.quad)?;
    verdict_report(cfg, "bounded", &a.bounded, &a.profile, VerdictKind::Bounded, VerdictKind::UnboundedEvidence)
}

pub fn compact(cfg: &RunConfig, res: &Resolved) -> Result<Report> {
    let a = assess(&pair(res)?, &res.weight, &res.grid, &res.quad)?;
    verdict_report(cfg, "compact", &a.compact, &a.profile, VerdictKind::Compact, VerdictKind::NoncompactEvidence)
}

/// `(Re a, Im a, alpha, beta, v(a) gamma(f, a, 2))` on the grid.
pub fn plotdata(cfg: &RunConfig, res: &Resolved) -> Result<Report> {
    let pair = pair(res)?;
    let f = res.require(&res.f, "f")?;
    let prof = alpha_beta_profile(&pair, &res.weight, &res.grid, &res.quad)?;
    let osc: Vec<Option<f64>> = res
        .grid
        .points()
        .par_iter()
        .map(|p| {
            let g = gamma_boundary_unchecked(f, p.point, 2.0, &res.quad).ok()?.value;
            Some(res.weight.v(p.point).ok()? * g)
        })
        .collect();
    let mut r = Report::new("plotdata", cfg);
    r.note("points", prof.rows.len());
    let mut t = Table::new("grid", &["re", "im", "alpha", "beta", "weighted_oscillation"]);
    for (row, o) in prof.rows.iter().zip(osc) {
        t.push(vec![row.point.re.into(), row.point.im.into(), row.alpha.into(), row.beta.into(), Cell::from(o)]);
    }
    r.tables.push(t);
    Ok(r)
}

pub fn examples(cfg: &RunConfig, res: &Resolved) -> Result<Report> {
    let names = suite::select(&cfg.run.which)?;
    let mut r = Report::new("examples", cfg);
    let mut t = Table::new("checks", &["case", "check", "expected", "observed", "pass", "detail"]);
    let mut failed = 0;
    for name in names {
        for c in suite::run_case(name, res, cfg.run.seed)? {
            failed += usize::from(!c.pass);
            t.push(vec![c.case.into(), c.check.into(), c.expected.into(), c.observed.into(), c.pass.into(), c.detail.into()]);
        }
    }
    r.note("checks", t.rows.len());
    r.note("failed", failed);
    r.tables.push(t);
    r.exit_code = if failed == 0 { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(r)
}
