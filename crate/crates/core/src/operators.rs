//! Weighted composition operators `f -> psi * (f o phi)`.
//!
//! The symbol functions `alpha` and `beta` are sampled on a [`DiskGrid`];
//! boundedness is read off their suprema and compactness off their maxima
//! over the level sets `|phi(a)| > r`. Verdicts are graded evidence from
//! finitely many samples, never proofs.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{AnalyticMap, Boundary};
use crate::bmoa::{classify_tail, seminorm, vmoa_profile, DiskGrid, GridPoint, TailClass};
use crate::cplx::c;
use crate::error::{Error, Result};
use crate::hardy::{gamma_boundary_unchecked, hp_norm, Exponent, QuadConfig};
use crate::weights::{check_a1, Trend, WeightSpec};

/// Level-set thresholds for the limsup along `|phi(a)| -> 1`.
pub const LIMSUP_THRESHOLDS: [f64; 7] = [0.9, 0.99, 0.999, 0.9999, 1.0 - 1e-5, 1.0 - 1e-6, 1.0 - 1e-7];

/// Rows above this size count as divergence outright.
pub const DEFAULT_BUDGET: f64 = 1e6;

/// A multiplier `psi` and a self-map `phi` of the disk.
#[derive(Debug, Clone)]
pub struct SymbolPair {
    psi: AnalyticMap,
    phi: AnalyticMap,
}

impl SymbolPair {
    pub fn new(psi: AnalyticMap, phi: AnalyticMap) -> Result<Self> {
        psi.validate()?;
        phi.validate()?;
        phi.check_self_map()?;
        Ok(Self { psi, phi })
    }

    pub fn psi(&self) -> &AnalyticMap {
        &self.psi
    }

    pub fn phi(&self) -> &AnalyticMap {
        &self.phi
    }
}

/// `f -> psi * (f o phi)`.
pub fn apply_wco(pair: &SymbolPair, f: &AnalyticMap) -> AnalyticMap {
    pair.psi.mul(&AnalyticMap::compose(f.clone(), pair.phi.clone()))
}

/// The recentred symbol `sigma_{phi(a)} o phi o sigma_a`, which fixes 0.
pub fn phi_a(phi: &AnalyticMap, a: Complex64) -> Result<AnalyticMap> {
    let inner = AnalyticMap::mobius(a)?;
    let b = phi.eval(a)?;
    let outer = AnalyticMap::mobius(b)?;
    Ok(AnalyticMap::compose(outer, AnalyticMap::compose(phi.clone(), inner)))
}

fn check_point(a: Complex64) -> Result<()> {
    if a.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { z: a, node: "operator symbol" })
    }
}

/// `(v(a) / v(phi(a))) |psi(a)| ||phi_a||_{H^2}`.
pub fn alpha(psi: &AnalyticMap, phi: &AnalyticMap, w: &WeightSpec, a: Complex64, cfg: &QuadConfig) -> Result<f64> {
    check_point(a)?;
    let m = psi.eval(a)?.norm();
    if m == 0.0 {
        return Ok(0.0);
    }
    let b = phi.eval(a)?;
    let norm = hp_norm(&phi_a(phi, a)?, Exponent::Two, cfg)?.value;
    Ok(w.v(a)? / w.v(b)? * m * norm)
}

/// `(1 + h(|phi(a)|)) v(a) gamma(psi, a, 1)`.
pub fn beta(psi: &AnalyticMap, phi: &AnalyticMap, w: &WeightSpec, a: Complex64, cfg: &QuadConfig) -> Result<f64> {
    beta_with(psi, phi, w, a, Exponent::One, cfg)
}

/// `beta` with the oscillation of `psi` measured in `H^p`; `p = 2` gives the
/// variant that is only conjecturally comparable.
pub fn beta_with(
    psi: &AnalyticMap,
    phi: &AnalyticMap,
    w: &WeightSpec,
    a: Complex64,
    p: Exponent,
    cfg: &QuadConfig,
) -> Result<f64> {
    check_point(a)?;
    if psi.is_constant() {
        return Ok(0.0);
    }
    let b = phi.eval(a)?;
    let osc = gamma_boundary_unchecked(psi, a, p.value(), cfg)?.value;
    Ok(w.eval_norm(b)? * w.v(a)? * osc)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaBetaRow {
    pub level: u32,
    pub point: Complex64,
    pub phi_abs: f64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// `beta` with `gamma(psi, a, 2)`, reported side by side.
    pub beta_two: Option<f64>,
    pub error: Option<String>,
}

impl AlphaBetaRow {
    pub fn total(&self) -> Option<f64> {
        Some(self.alpha? + self.beta?)
    }
}

/// Maxima over the rows with `|phi(a)| > threshold`; `None` when no grid
/// point reaches the level set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdMax {
    pub threshold: f64,
    pub count: usize,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub total: Option<f64>,
    pub witness: Option<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaBetaProfile {
    pub rows: Vec<AlphaBetaRow>,
    pub sup_alpha: f64,
    pub sup_beta: f64,
    pub sup_beta_two: f64,
    pub witness_alpha: Complex64,
    pub witness_beta: Complex64,
    /// Maximum of `alpha + beta` over each grid level.
    pub level_maxima: Vec<f64>,
    pub thresholds: Vec<ThresholdMax>,
    /// Largest `|phi(a)|` over the grid.
    pub phi_sup: f64,
    pub failed: usize,
    /// `|psi(0)| (1 + h(|phi(0)|))`.
    pub origin_term: f64,
    pub norm_estimate: f64,
}

fn argmax<'a>(rows: impl Iterator<Item = (&'a AlphaBetaRow, Option<f64>)>) -> (f64, Complex64) {
    let mut best = (0.0, c(0.0, 0.0));
    for (r, v) in rows {
        if let Some(v) = v {
            if v > best.0 {
                best = (v, r.point);
            }
        }
    }
    best
}

fn row_at(pair: &SymbolPair, w: &WeightSpec, p: &GridPoint, cfg: &QuadConfig) -> AlphaBetaRow {
    let a = p.point;
    let phi_abs = pair.phi.eval(a).map(|b| b.norm()).unwrap_or(f64::NAN);
    let parts = (|| {
        let al = alpha(&pair.psi, &pair.phi, w, a, cfg)?;
        let be = beta(&pair.psi, &pair.phi, w, a, cfg)?;
        let b2 = beta_with(&pair.psi, &pair.phi, w, a, Exponent::Two, cfg)?;
        for v in [al, be, b2] {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("symbol function at {a}")));
            }
        }
        Ok((al, be, b2))
    })();
    match parts {
        Ok((al, be, b2)) => AlphaBetaRow {
            level: p.level,
            point: a,
            phi_abs,
            alpha: Some(al),
            beta: Some(be),
            beta_two: Some(b2),
            error: None,
        },
        Err(e) => AlphaBetaRow {
            level: p.level,
            point: a,
            phi_abs,
            alpha: None,
            beta: None,
            beta_two: None,
            error: Some(e.to_string()),
        },
    }
}

fn threshold_maxima<T>(rows: &[T], thresholds: &[f64], key: impl Fn(&T) -> (f64, Complex64, Option<f64>, Option<f64>)) -> Vec<ThresholdMax> {
    thresholds
        .iter()
        .map(|&r| {
            let mut out = ThresholdMax { threshold: r, count: 0, alpha: None, beta: None, total: None, witness: None };
            for row in rows {
                let (phi_abs, point, x, y) = key(row);
                if !(phi_abs > r) {
                    continue;
                }
                out.count += 1;
                let (Some(x), Some(y)) = (x, y) else { continue };
                out.alpha = Some(out.alpha.map_or(x, |m: f64| m.max(x)));
                out.beta = Some(out.beta.map_or(y, |m: f64| m.max(y)));
                if out.total.is_none_or(|t| x + y > t) {
                    out.total = Some(x + y);
                    out.witness = Some(point);
                }
            }
            out
        })
        .collect()
}

/// Samples `alpha` and `beta` on every grid point. Failed rows are kept and
/// flagged rather than dropped.
pub fn alpha_beta_profile(pair: &SymbolPair, w: &WeightSpec, grid: &DiskGrid, cfg: &QuadConfig) -> Result<AlphaBetaProfile> {
    cfg.validate()?;
    let rows: Vec<AlphaBetaRow> = grid.points().par_iter().map(|p| row_at(pair, w, p, cfg)).collect();
    let (sup_alpha, witness_alpha) = argmax(rows.iter().map(|r| (r, r.alpha)));
    let (sup_beta, witness_beta) = argmax(rows.iter().map(|r| (r, r.beta)));
    let (sup_beta_two, _) = argmax(rows.iter().map(|r| (r, r.beta_two)));
    let mut level_maxima = vec![0.0f64; grid.levels as usize + 1];
    for r in &rows {
        if let Some(t) = r.total() {
            let m = &mut level_maxima[r.level as usize];
            *m = (*m).max(t);
        }
    }
    let thresholds = threshold_maxima(&rows, &LIMSUP_THRESHOLDS, |r| (r.phi_abs, r.point, r.alpha, r.beta));
    let phi_sup = rows.iter().map(|r| r.phi_abs).fold(0.0, f64::max);
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    let zero = c(0.0, 0.0);
    let origin_term = pair.psi.eval(zero)?.norm() * w.eval_norm(pair.phi.eval(zero)?)?;
    Ok(AlphaBetaProfile {
        norm_estimate: origin_term + sup_alpha + sup_beta,
        rows,
        sup_alpha,
        sup_beta,
        sup_beta_two,
        witness_alpha,
        witness_beta,
        level_maxima,
        thresholds,
        phi_sup,
        failed,
        origin_term,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    Bounded,
    UnboundedEvidence,
    Compact,
    NoncompactEvidence,
    Inconclusive,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Bounded => "bounded",
            Self::UnboundedEvidence => "unbounded-evidence",
            Self::Compact => "compact",
            Self::NoncompactEvidence => "noncompact-evidence",
            Self::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// Norm-formula estimate `|psi(0)| ||delta_{phi(0)}|| + sup alpha + sup beta`.
    pub estimate: Option<f64>,
    pub limsup: Option<f64>,
    pub witnesses: Vec<Complex64>,
    pub thresholds: Vec<ThresholdMax>,
    pub diagnostics: BTreeMap<String, String>,
}

impl Verdict {
    fn inconclusive(reason: impl Into<String>) -> Self {
        let mut diagnostics = BTreeMap::new();
        diagnostics.insert("reason".to_string(), reason.into());
        Self {
            kind: VerdictKind::Inconclusive,
            estimate: None,
            limsup: None,
            witnesses: Vec::new(),
            thresholds: Vec::new(),
            diagnostics,
        }
    }

    fn note(&mut self, key: &str, value: impl fmt::Display) {
        self.diagnostics.insert(key.to_string(), value.to_string());
    }
}

/// Growth below which a running supremum counts as settled.
const SETTLED_GROWTH: f64 = 0.01;
const DIVERGENCE_RUN: usize = 5;

/// Reads boundedness off the level maxima of `alpha + beta`: settled when the
/// running supremum grew by under 1% over the last two levels, diverging
/// when the last five levels increase strictly without settling, or when a
/// row exceeds `budget`.
pub fn bounded_from_profile(profile: &AlphaBetaProfile, budget: f64) -> Verdict {
    let m = &profile.level_maxima;
    let mut v = Verdict::inconclusive("");
    v.diagnostics.clear();
    v.estimate = Some(profile.norm_estimate);
    v.witnesses = vec![profile.witness_alpha, profile.witness_beta];
    v.thresholds = profile.thresholds.clone();
    v.note("sup_alpha", profile.sup_alpha);
    v.note("sup_beta", profile.sup_beta);
    v.note("sup_beta_two", profile.sup_beta_two);
    v.note("failed_rows", profile.failed);
    if profile.failed > 0 {
        v.note("reason", "some grid rows failed to evaluate");
        return v;
    }
    let over: Vec<&AlphaBetaRow> = profile.rows.iter().filter(|r| r.total().is_some_and(|t| t > budget)).collect();
    if let Some(r) = over.first() {
        v.kind = VerdictKind::UnboundedEvidence;
        v.witnesses = vec![r.point];
        v.note("reason", format!("row exceeds budget {budget}"));
        return v;
    }
    if m.len() < 3 {
        v.note("reason", "too few levels");
        return v;
    }
    let running: Vec<f64> = m
        .iter()
        .scan(0.0f64, |s, x| {
            *s = s.max(*x);
            Some(*s)
        })
        .collect();
    let n = running.len();
    let (last, before) = (running[n - 1], running[n - 3]);
    let growth = if before > 0.0 { last / before - 1.0 } else if last > 0.0 { f64::INFINITY } else { 0.0 };
    v.note("growth_last_two_levels", growth);
    let tail = &m[n.saturating_sub(DIVERGENCE_RUN + 1)..];
    let rising = tail.len() > DIVERGENCE_RUN && tail.windows(2).all(|p| p[1] > p[0]);
    if growth < SETTLED_GROWTH {
        v.kind = VerdictKind::Bounded;
    } else if rising {
        v.kind = VerdictKind::UnboundedEvidence;
        v.note("reason", format!("level maxima increase strictly over the last {DIVERGENCE_RUN} levels"));
    } else {
        v.note("reason", "supremum has not settled");
    }
    v
}

/// Compactness from the limsup estimates along `|phi(a)| -> 1`, relative to
/// `tol_factor` times the norm estimate. Maps whose grid image stays below
/// `INTERIOR_MARGIN` are judged by the tail along `|a| -> 1` instead.
pub fn compact_from_profile(profile: &AlphaBetaProfile, bounded: &Verdict, tol_factor: f64) -> Verdict {
    if bounded.kind != VerdictKind::Bounded {
        let mut v = Verdict::inconclusive(format!("boundedness verdict is {}", bounded.kind));
        v.thresholds = profile.thresholds.clone();
        return v;
    }
    let norm = profile.norm_estimate;
    let tol = tol_factor * norm;
    let mut v = Verdict::inconclusive("");
    v.diagnostics.clear();
    v.estimate = Some(norm);
    v.thresholds = profile.thresholds.clone();
    v.note("tolerance", tol);
    if norm == 0.0 {
        v.kind = VerdictKind::Compact;
        v.limsup = Some(0.0);
        v.witnesses = vec![c(0.0, 0.0)];
        v.note("route", "zero operator");
        return v;
    }
    if profile.phi_sup < INTERIOR_MARGIN {
        v.note("route", "interior map: limsup along |a| -> 1");
        let m = &profile.level_maxima;
        let last = m[m.len() - 1];
        let tail = classify_tail(m);
        v.limsup = Some(last);
        v.note("tail", tail);
        let level = (m.len() - 1) as u32;
        let witness = profile
            .rows
            .iter()
            .filter(|r| r.level == level)
            .max_by(|x, y| x.total().unwrap_or(0.0).total_cmp(&y.total().unwrap_or(0.0)))
            .map_or(c(0.0, 0.0), |r| r.point);
        v.witnesses = vec![witness];
        if tail == TailClass::DecayingToZero || last < tol {
            v.kind = VerdictKind::Compact;
        } else if tail == TailClass::Bounded && last > 10.0 * tol {
            v.kind = VerdictKind::NoncompactEvidence;
        }
        return v;
    }
    v.note("route", "limsup along |phi(a)| -> 1");
    let seen: Vec<&ThresholdMax> = profile.thresholds.iter().filter(|t| t.total.is_some()).collect();
    let empty: Vec<String> = profile.thresholds.iter().filter(|t| t.count == 0).map(|t| t.threshold.to_string()).collect();
    if !empty.is_empty() {
        v.note("empty_level_sets", empty.join(" "));
    }
    if seen.len() < 2 {
        v.note("reason", "fewer than two nonempty level sets");
        return v;
    }
    let vals: Vec<f64> = seen.iter().map(|t| t.total.unwrap_or(0.0)).collect();
    let last = vals[vals.len() - 1];
    let prev = vals[vals.len() - 2];
    v.limsup = Some(last);
    v.witnesses = seen.iter().filter_map(|t| t.witness).collect();
    if vals.windows(2).all(|p| p[1] <= p[0]) && last < tol {
        v.kind = VerdictKind::Compact;
    } else if last > 10.0 * tol && last >= 0.5 * prev {
        v.kind = VerdictKind::NoncompactEvidence;
    } else {
        v.note("reason", "limsup estimates neither vanish nor settle");
    }
    v
}

/// Below this grid supremum of `|phi|` the map is treated as interior.
pub const INTERIOR_MARGIN: f64 = 0.99;

/// Default compactness tolerance relative to the norm estimate.
pub const COMPACT_TOL: f64 = 1e-3;

/// Profile plus both verdicts, computed once.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assessment {
    pub profile: AlphaBetaProfile,
    pub bounded: Verdict,
    pub compact: Verdict,
}

pub fn assess(pair: &SymbolPair, w: &WeightSpec, grid: &DiskGrid, cfg: &QuadConfig) -> Result<Assessment> {
    let profile = alpha_beta_profile(pair, w, grid, cfg)?;
    let bounded = bounded_from_profile(&profile, DEFAULT_BUDGET);
    let compact = compact_from_profile(&profile, &bounded, COMPACT_TOL);
    Ok(Assessment { profile, bounded, compact })
}

pub fn boundedness_verdict(pair: &SymbolPair, w: &WeightSpec, grid: &DiskGrid, cfg: &QuadConfig, budget: f64) -> Verdict {
    match alpha_beta_profile(pair, w, grid, cfg) {
        Ok(p) => bounded_from_profile(&p, budget),
        Err(e) => Verdict::inconclusive(e.to_string()),
    }
}

pub fn compactness_verdict(pair: &SymbolPair, w: &WeightSpec, grid: &DiskGrid, cfg: &QuadConfig) -> Verdict {
    match assess(pair, w, grid, cfg) {
        Ok(a) => a.compact,
        Err(e) => Verdict::inconclusive(e.to_string()),
    }
}

/// Boundedness on the vanishing subspace: the bounded verdict plus
/// `psi` in the vanishing class plus `v(a) |psi(a)| gamma(phi, a, 2) -> 0`.
pub fn vmoa_boundedness_verdict(pair: &SymbolPair, w: &WeightSpec, grid: &DiskGrid, cfg: &QuadConfig) -> Verdict {
    let mut v = boundedness_verdict(pair, w, grid, cfg, DEFAULT_BUDGET);
    if v.kind != VerdictKind::Bounded {
        return v;
    }
    let checks = (|| -> Result<(TailClass, TailClass)> {
        let psi_tail = vmoa_profile(&pair.psi, w, grid, cfg)?.tail;
        let rows: Vec<Result<(u32, f64)>> = grid
            .points()
            .par_iter()
            .map(|p| {
                let m = pair.psi.eval(p.point)?.norm();
                if m == 0.0 {
                    return Ok((p.level, 0.0));
                }
                let g = gamma_boundary_unchecked(&pair.phi, p.point, 2.0, cfg)?.value;
                Ok((p.level, w.v(p.point)? * m * g))
            })
            .collect();
        let mut maxima = vec![0.0f64; grid.levels as usize + 1];
        for r in rows {
            let (l, x) = r?;
            maxima[l as usize] = maxima[l as usize].max(x);
        }
        Ok((psi_tail, classify_tail(&maxima)))
    })();
    match checks {
        Ok((psi_tail, osc_tail)) => {
            v.note("psi_vanishing_tail", psi_tail);
            v.note("weighted_oscillation_tail", osc_tail);
            let decaying = |t: TailClass| t == TailClass::DecayingToZero;
            let persistent = |t: TailClass| matches!(t, TailClass::Bounded | TailClass::Diverging);
            if decaying(psi_tail) && decaying(osc_tail) {
                v.kind = VerdictKind::Bounded;
            } else if persistent(psi_tail) || persistent(osc_tail) {
                v.kind = VerdictKind::UnboundedEvidence;
                v.note("reason", "a vanishing-class condition fails");
            } else {
                v.kind = VerdictKind::Inconclusive;
            }
        }
        Err(e) => {
            v.kind = VerdictKind::Inconclusive;
            v.note("reason", e);
        }
    }
    v
}

/// The test function witnessing `alpha`, before and after normalization.
#[derive(Debug, Clone)]
pub struct AlphaTestFunction {
    /// `(sigma_b - b) / v(b)`.
    pub raw: AnalyticMap,
    pub norm: f64,
    pub normalized: AnalyticMap,
}

pub fn test_fn_alpha(b: Complex64, w: &WeightSpec, grid: &DiskGrid, cfg: &QuadConfig) -> Result<AlphaTestFunction> {
    check_point(b)?;
    let raw = AnalyticMap::mobius(b)?.shift(-b).scale(c(1.0 / w.v(b)?, 0.0));
    let norm = seminorm(&raw, w, Exponent::Two, grid, cfg)?.norm;
    let normalized = raw.scale(c(1.0 / norm, 0.0));
    Ok(AlphaTestFunction { raw, norm, normalized })
}

/// The test function witnessing `beta`.
#[derive(Debug, Clone)]
pub struct BetaTestFunction {
    /// `(1 + h(conj(b) z))^2`.
    pub raw: AnalyticMap,
    pub norm: f64,
    pub normalized: AnalyticMap,
    /// `1 + h(|b|)`.
    pub eval_norm: f64,
    /// `norm / eval_norm`; both sides are comparable up to constants.
    pub ratio: f64,
}

pub fn test_fn_beta(b: Complex64, w: &WeightSpec, grid: &DiskGrid, cfg: &QuadConfig) -> Result<BetaTestFunction> {
    check_point(b)?;
    let base = AnalyticMap::hprimitive(w.clone(), b.conj())?.shift(c(1.0, 0.0));
    let raw = AnalyticMap::pow(base, 2)?;
    let norm = seminorm(&raw, w, Exponent::Two, grid, cfg)?.norm;
    let normalized = raw.scale(c(1.0 / norm, 0.0));
    let eval_norm = w.eval_norm(b)?;
    Ok(BetaTestFunction { raw, norm, normalized, eval_norm, ratio: norm / eval_norm })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFnRow {
    pub point: Complex64,
    pub phi_abs: f64,
    /// `||W g||` for the normalized alpha test function at `phi(a)`.
    pub image_norm: Option<f64>,
    pub beta: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFnProfile {
    pub rows: Vec<TestFnRow>,
    pub thresholds: Vec<ThresholdMax>,
}

/// `||W g_a|| + beta(a)` on the outer grid points with `|phi(a)|` above the
/// first threshold; the norms are taken on `inner`, which should be coarse.
pub fn test_function_profile(
    pair: &SymbolPair,
    w: &WeightSpec,
    outer: &DiskGrid,
    inner: &DiskGrid,
    cfg: &QuadConfig,
) -> Result<TestFnProfile> {
    cfg.validate()?;
    let mut pts = Vec::new();
    for p in outer.points() {
        let b = pair.phi.eval(p.point)?;
        if b.norm() > LIMSUP_THRESHOLDS[0] {
            pts.push((p.point, b));
        }
    }
    let rows: Vec<TestFnRow> = pts
        .par_iter()
        .map(|&(a, b)| {
            let parts = (|| {
                let t = test_fn_alpha(b, w, inner, cfg)?;
                let image = seminorm(&apply_wco(pair, &t.normalized), w, Exponent::Two, inner, cfg)?.norm;
                Ok::<_, Error>((image, beta(&pair.psi, &pair.phi, w, a, cfg)?))
            })();
            match parts {
                Ok((image, be)) => TestFnRow { point: a, phi_abs: b.norm(), image_norm: Some(image), beta: Some(be), error: None },
                Err(e) => TestFnRow { point: a, phi_abs: b.norm(), image_norm: None, beta: None, error: Some(e.to_string()) },
            }
        })
        .collect();
    let thresholds = threshold_maxima(&rows, &LIMSUP_THRESHOLDS, |r| (r.phi_abs, r.point, r.image_norm, r.beta));
    Ok(TestFnProfile { rows, thresholds })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerRow {
    pub point: Complex64,
    /// `||(phi^n)_a||^2`.
    pub power_norm: f64,
    /// `||phi_a||^2`.
    pub base_norm: f64,
    /// `(1 - |a|)^(1 - c0)`.
    pub remainder: f64,
    /// `power_norm / (remainder + base_norm)`.
    pub ratio: f64,
    /// `base_norm / (remainder + power_norm)`, reported without a threshold.
    pub reverse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerProfile {
    pub n: u32,
    pub eps0: f64,
    pub c0: f64,
    pub rows: Vec<PowerRow>,
    /// Largest `ratio` over the grid.
    pub constant: f64,
    pub violation: bool,
    pub warning: Option<String>,
}

pub const POWER_RATIO_LIMIT: f64 = 1e3;

/// Compares the recentred `phi^n` with the recentred `phi` over the grid.
pub fn phi_power_profile(phi: &AnalyticMap, w: &WeightSpec, n: u32, grid: &DiskGrid, cfg: &QuadConfig) -> Result<PowerProfile> {
    if !(1..=5).contains(&n) {
        return Err(Error::InvalidSymbol(format!("power {n} must lie in 1..=5")));
    }
    phi.check_self_map()?;
    if phi.boundary() != Boundary::Continuous {
        return Err(Error::InvalidSymbol(format!("{phi} must be continuous on the closed disk")));
    }
    let eps0 = w.eps0();
    let c0 = eps0 / (2.0 * (1.0 + eps0));
    let power = AnalyticMap::pow(phi.clone(), n)?;
    let rows: Vec<Result<PowerRow>> = grid
        .points()
        .par_iter()
        .map(|p| {
            let a = p.point;
            let power_norm = hp_norm(&phi_a(&power, a)?, Exponent::Two, cfg)?.value.powi(2);
            let base_norm = hp_norm(&phi_a(phi, a)?, Exponent::Two, cfg)?.value.powi(2);
            let remainder = (1.0 - a.norm()).powf(1.0 - c0);
            Ok(PowerRow {
                point: a,
                power_norm,
                base_norm,
                remainder,
                ratio: power_norm / (remainder + base_norm),
                reverse: base_norm / (remainder + power_norm),
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let constant = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let a1 = check_a1(w);
    let warning = (a1.classification != Trend::Bounded)
        .then(|| format!("declared eps0 = {eps0} is not confirmed by the growth check ({:?})", a1.classification));
    Ok(PowerProfile { n, eps0, c0, rows, constant, violation: constant > POWER_RATIO_LIMIT, warning })
}

/// `max ||W f|| / ||f||` over the given functions, a lower bound for the
/// operator norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayleighBound {
    pub lower: f64,
    pub ratios: Vec<f64>,
}

pub fn rayleigh_lower_bound(
    pair: &SymbolPair,
    w: &WeightSpec,
    fs: &[AnalyticMap],
    grid: &DiskGrid,
    cfg: &QuadConfig,
) -> Result<RayleighBound> {
    let mut ratios = Vec::with_capacity(fs.len());
    for f in fs {
        let n = seminorm(f, w, Exponent::Two, grid, cfg)?.norm;
        if n == 0.0 {
            continue;
        }
        ratios.push(seminorm(&apply_wco(pair, f), w, Exponent::Two, grid, cfg)?.norm / n);
    }
    Ok(RayleighBound { lower: ratios.iter().copied().fold(0.0, f64::max), ratios })
}

#[cfg(test)]
mod tests;
