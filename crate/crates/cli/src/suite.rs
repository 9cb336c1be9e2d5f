//! The packaged example cases. Each case fixes its own symbols and weight;
//! only the grid, quadrature settings and seed come from the run config.

use anyhow::{bail, Result};
use bmoa_core::analytic::AnalyticMap;
use bmoa_core::bmoa::DiskGrid;
use bmoa_core::operators::{
    alpha, assess, boundedness_verdict, phi_power_profile, rayleigh_lower_bound, vmoa_boundedness_verdict, SymbolPair,
    VerdictKind, DEFAULT_BUDGET,
};
use bmoa_core::weights::WeightSpec;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Resolved;

pub const CASES: [&str; 6] = ["halfmap", "product-compact", "blaschke", "multiplier", "vmoa", "phi-power"];

/// Number of zeros of the truncated Blaschke product.
pub const BLASCHKE_ZEROS: u32 = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub case: String,
    pub check: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    pub detail: String,
}

fn check(case: &str, what: &str, expected: impl ToString, observed: impl ToString, detail: String) -> Check {
    let (expected, observed) = (expected.to_string(), observed.to_string());
    Check { case: case.into(), check: what.into(), pass: expected == observed, expected, observed, detail }
}

pub fn select(which: &str) -> Result<Vec<&'static str>> {
    if which == "all" {
        return Ok(CASES.to_vec());
    }
    match CASES.iter().find(|c| **c == which) {
        Some(c) => Ok(vec![*c]),
        None => bail!("unknown example {which:?}; choose one of {} or all", CASES.join(", ")),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn poly(coeffs: &[f64]) -> Result<AnalyticMap> {
    Ok(AnalyticMap::polynomial(coeffs.iter().map(|x| c(*x, 0.0)).collect())?)
}

/// Random test functions for the Rayleigh lower bound.
fn test_functions(seed: u64) -> Result<Vec<AnalyticMap>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..5)
        .map(|_| {
            let deg = rng.gen_range(1..=4);
            let coeffs = (0..=deg).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            Ok(AnalyticMap::polynomial(coeffs)?)
        })
        .collect()
}

pub fn blaschke_zeros() -> Vec<Complex64> {
    (1..=BLASCHKE_ZEROS).map(|k| c(1.0 - (-(k as f64)).exp2(), 0.0)).collect()
}

fn verdict_pair(name: &str, pair: &SymbolPair, w: &WeightSpec, res: &Resolved, compact: VerdictKind, seed: u64) -> Result<Vec<Check>> {
    let a = assess(pair, w, &res.grid, &res.quad)?;
    let mut out = vec![
        check(name, "bounded", VerdictKind::Bounded, a.bounded.kind, format!("norm estimate {:.6}", a.profile.norm_estimate)),
        check(name, "compact", compact, a.compact.kind, format!("limsup {:.3e}", a.compact.limsup.unwrap_or(f64::NAN))),
    ];
    let lower = rayleigh_lower_bound(pair, w, &test_functions(seed)?, &res.grid, &res.quad)?.lower;
    let ratio = lower / a.profile.norm_estimate;
    out.push(Check {
        case: name.into(),
        check: "norm formula dominates Rayleigh bound".into(),
        expected: "ratio <= 100".into(),
        observed: format!("{ratio:.4}"),
        pass: ratio <= 100.0,
        detail: format!("lower bound {lower:.6}"),
    });
    Ok(out)
}

pub fn run_case(name: &str, res: &Resolved, seed: u64) -> Result<Vec<Check>> {
    let log1 = WeightSpec::log(1.0)?;
    let power = WeightSpec::power(0.25)?;
    let one = AnalyticMap::constant(c(1.0, 0.0));
    let half = AnalyticMap::halfmap();
    match name {
        "halfmap" => verdict_pair(name, &SymbolPair::new(one, half)?, &log1, res, VerdictKind::NoncompactEvidence, seed),
        "product-compact" => {
            verdict_pair(name, &SymbolPair::new(poly(&[1.0, -1.0])?, half)?, &log1, res, VerdictKind::Compact, seed)
        }
        "multiplier" => verdict_pair(
            name,
            &SymbolPair::new(poly(&[1.0, 0.5])?, AnalyticMap::identity())?,
            &log1,
            res,
            VerdictKind::NoncompactEvidence,
            seed,
        ),
        "blaschke" => {
            let zeros = blaschke_zeros();
            let b = AnalyticMap::blaschke(zeros.clone(), 0)?;
            let pair = SymbolPair::new(one.clone(), b.clone())?;
            let grid = DiskGrid::new(BLASCHKE_ZEROS, res.grid.angles)?;
            let v = boundedness_verdict(&pair, &log1, &grid, &res.quad, DEFAULT_BUDGET);
            let along: Vec<f64> = zeros.iter().map(|z| alpha(&one, &b, &log1, *z, &res.quad)).collect::<Result<_, _>>()?;
            let rising = along.windows(2).all(|p| p[1] > p[0]);
            let growth = along[along.len() - 1] / along[3];
            Ok(vec![
                check(name, "bounded", VerdictKind::UnboundedEvidence, v.kind, format!("grid levels {BLASCHKE_ZEROS}")),
                Check {
                    case: name.into(),
                    check: "alpha increases along the zeros".into(),
                    expected: "increasing".into(),
                    observed: if rising { "increasing" } else { "not increasing" }.into(),
                    pass: rising,
                    detail: format!("alpha(a_12) / alpha(a_4) = {growth:.4}"),
                },
            ])
        }
        "vmoa" => {
            let a = vmoa_boundedness_verdict(&SymbolPair::new(one, half)?, &power, &res.grid, &res.quad);
            let h = AnalyticMap::hprimitive(power.clone(), c(1.0, 0.0))?;
            let pair = SymbolPair::new(h, AnalyticMap::identity().scale(c(0.5, 0.0)))?;
            let b = boundedness_verdict(&pair, &power, &res.grid, &res.quad, DEFAULT_BUDGET);
            let v = vmoa_boundedness_verdict(&pair, &power, &res.grid, &res.quad);
            let tail = |v: &bmoa_core::operators::Verdict| v.diagnostics.get("psi_vanishing_tail").cloned().unwrap_or_default();
            Ok(vec![
                check(name, "(1, halfmap) on the vanishing subspace", VerdictKind::Bounded, a.kind, format!("psi tail {}", tail(&a))),
                check(name, "(h, z/2) on the full space", VerdictKind::Bounded, b.kind, String::new()),
                check(name, "(h, z/2) on the vanishing subspace", VerdictKind::UnboundedEvidence, v.kind, format!("psi tail {}", tail(&v))),
            ])
        }
        "phi-power" => {
            let p = phi_power_profile(&half, &power, 2, &res.grid, &res.quad)?;
            Ok(vec![Check {
                case: name.into(),
                check: "squared half map comparison".into(),
                expected: "no violation".into(),
                observed: if p.violation { "violation" } else { "no violation" }.into(),
                pass: !p.violation,
                detail: format!("implied constant {:.4}, c0 {:.4}", p.constant, p.c0),
            }])
        }
        other => bail!("unknown example {other:?}"),
    }
}
