//! Numerical certificates for the admissibility conditions of a weight.
//!
//! Every check samples a supremum (or infimum) on a sequence of nested grids
//! and classifies how the running estimate behaves under refinement. All
//! ratios are formed in logarithmic coordinates.

use std::f64::consts::{FRAC_PI_2, LN_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::WeightSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Bounded,
    Diverging,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// `sup_{0<x<1} x g(1/x)^(2+eps0) < oo`
    A1,
    /// `g(1/b) <= C g(a/b) g(1/a)` for `0 < b <= a < 2`
    A2,
    /// `|g(z)| >= c g(|z|)` on `Re z >= 1/2`
    A3,
    /// `g(y) <= C g(x)` for `1 <= y <= x`
    AlmostIncreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Admissible,
    NotAdmissible,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub condition: Condition,
    /// The sampled supremum (infimum for A3).
    pub estimate: f64,
    /// Natural log of `estimate`; stays finite when `estimate` overflows.
    pub log_estimate: f64,
    pub classification: Trend,
    /// Coordinates of the sample realizing the estimate.
    pub witness: Vec<f64>,
    /// Log of the running estimate after each refinement level.
    pub levels: Vec<f64>,
    /// A2: supremum restricted to `a <= 1`. A3: supremum of the same ratio.
    pub secondary: Option<f64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub weight: String,
    pub eps0: f64,
    pub verdict: Verdict,
    pub conditions: Vec<ConditionRecord>,
}

/// Growth of a running supremum (in logs) over the last `span` levels.
fn growth(levels: &[f64], span: usize) -> f64 {
    let n = levels.len();
    if n <= span {
        return levels[n - 1] - levels[0];
    }
    levels[n - 1] - levels[n - 1 - span]
}

const DIVERGENCE_SPAN: usize = 10;

fn classify_sup(levels: &[f64]) -> Trend {
    if growth(levels, DIVERGENCE_SPAN) > 10f64.ln() {
        Trend::Diverging
    } else if growth(levels, 2) < 1.01f64.ln() {
        Trend::Bounded
    } else {
        Trend::Inconclusive
    }
}

fn record(condition: Condition, best: f64, witness: Vec<f64>, levels: Vec<f64>, classification: Trend) -> ConditionRecord {
    ConditionRecord {
        condition,
        estimate: best.exp(),
        log_estimate: best,
        classification,
        witness,
        levels,
        secondary: None,
        note: String::new(),
    }
}

/// A1 on `x = 2^-1 .. 2^-40`. Diverging means the last ten values increase
/// monotonically by a factor above 10; bounded means the running supremum
/// grew by less than a factor 1.5 over those levels.
pub fn check_a1(w: &WeightSpec) -> ConditionRecord {
    let p = 2.0 + w.eps0();
    let values: Vec<f64> = (1..=40).map(|k| -(k as f64) * LN_2 + p * w.ln_g_exp(k as f64 * LN_2)).collect();
    let mut levels = Vec::with_capacity(values.len());
    let (mut best, mut arg) = (f64::NEG_INFINITY, 0);
    for (i, v) in values.iter().enumerate() {
        if *v > best {
            best = *v;
            arg = i;
        }
        levels.push(best);
    }
    let tail = &values[values.len() - DIVERGENCE_SPAN - 1..];
    let monotone = tail.windows(2).all(|w| w[1] > w[0]);
    let classification = if monotone && tail[tail.len() - 1] - tail[0] > 10f64.ln() {
        Trend::Diverging
    } else if growth(&levels, DIVERGENCE_SPAN) < 1.5f64.ln() {
        Trend::Bounded
    } else {
        Trend::Inconclusive
    };
    let mut r = record(Condition::A1, best, vec![f64::powi(2.0, -(arg as i32 + 1))], levels, classification);
    r.note = format!("eps0 = {}", w.eps0());
    r
}

/// Refinement levels for A2 in the coordinates `B = ln(1/b)`.
///
/// Levels 1..=40 cover `b >= 2^-40` in dyadic steps; further levels extend
/// `B` geometrically (factor 1.5) up to about `10^6`, which is only
/// reachable because the generator is evaluated in log coordinates.
fn a2_levels() -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = (1..=40).map(|k| ((k - 1) as f64 * LN_2, k as f64 * LN_2)).collect();
    let mut hi = 40.0 * LN_2;
    while hi < 1.0e6 {
        let next = hi * 1.5;
        out.push((hi, next));
        hi = next;
    }
    out
}

fn a2_ratio(w: &WeightSpec, big_b: f64, big_a: f64) -> f64 {
    w.ln_g_exp(big_b) - w.ln_g_exp(big_b - big_a) - w.ln_g_exp(big_a)
}

fn a2_a_samples(big_b: f64) -> Vec<f64> {
    let lo = -LN_2;
    let mut out = vec![lo * (1.0 - 1e-9)];
    if big_b <= 40.0 * LN_2 {
        let n = ((big_b - lo) / (LN_2 / 4.0)).ceil() as usize;
        out.extend((1..=n).map(|j| lo + (big_b - lo) * j as f64 / n as f64));
    } else {
        out.extend((1..=32).map(|j| big_b * j as f64 / 32.0));
        out.extend([-0.5, 0.0, 0.5, 1.0, 2.0, 4.0, 8.0]);
    }
    out
}

/// A2 on pairs `b <= a < 2`, sampled in `(B, A) = (ln 1/b, ln 1/a)`.
pub fn check_a2(w: &WeightSpec) -> ConditionRecord {
    let mut levels = Vec::new();
    let (mut best, mut witness) = (f64::NEG_INFINITY, vec![]);
    let mut best_unit = f64::NEG_INFINITY;
    for (lo, hi) in a2_levels() {
        for i in 1..=4 {
            let big_b = lo + (hi - lo) * i as f64 / 4.0;
            for big_a in a2_a_samples(big_b) {
                let r = a2_ratio(w, big_b, big_a);
                if r > best {
                    best = r;
                    witness = vec![-big_b, -big_a];
                }
                if big_a >= 0.0 && r > best_unit {
                    best_unit = r;
                }
            }
        }
        levels.push(best);
    }
    let classification = classify_sup(&levels);
    let mut rec = record(Condition::A2, best, witness, levels, classification);
    rec.secondary = Some(best_unit.exp());
    rec.note = "witness is (ln b, ln a); secondary restricts to a <= 1".into();
    rec
}

/// A3 on `Re z >= 1/2`: infimum of `|g(z)| / g(|z|)` over `|z|` up to
/// `2^40` and arguments in `(-pi/2, pi/2)`.
pub fn check_a3(w: &WeightSpec) -> ConditionRecord {
    if !w.has_halfplane_extension() {
        let mut r = record(Condition::A3, f64::NAN, vec![], vec![], Trend::Inconclusive);
        r.note = "generator has no analytic extension to the half-plane".into();
        return r;
    }
    let mut levels = Vec::new();
    let (mut worst, mut witness) = (f64::INFINITY, vec![]);
    let mut sup = f64::NEG_INFINITY;
    for k in 0..=40 {
        for i in 0..4 {
            let rho = 0.5 * f64::powf(2.0, k as f64 + i as f64 / 4.0);
            let max_arg = (0.5 / rho).clamp(-1.0, 1.0).acos().min(FRAC_PI_2 * (1.0 - 1e-12));
            for j in -8..=8 {
                let theta = max_arg * j as f64 / 8.0;
                let z = Complex64::from_polar(rho, theta);
                let Some(gz) = w.g_complex(z) else { continue };
                let r = gz.norm().ln() - w.ln_g_exp(rho.ln());
                if r < worst {
                    worst = r;
                    witness = vec![z.re, z.im];
                }
                sup = sup.max(r);
            }
        }
        levels.push(worst);
    }
    let n = levels.len();
    let classification = if worst.exp() <= 1e-3 {
        Trend::Diverging
    } else if (levels[n - 3] - levels[n - 1]).abs() < 1.01f64.ln() {
        Trend::Bounded
    } else {
        Trend::Inconclusive
    };
    let mut rec = record(Condition::A3, worst, witness, levels, classification);
    rec.secondary = Some(sup.exp());
    rec.note = "estimate is an infimum; bounded means bounded below by 1e-3".into();
    rec
}

/// Smallest `C` with `g(y) <= C g(x)` for `1 <= y <= x <= 2^40`.
pub fn check_almost_increasing(w: &WeightSpec) -> ConditionRecord {
    let mut levels = Vec::new();
    let mut running_max = f64::NEG_INFINITY;
    let (mut best, mut witness) = (0.0f64, vec![1.0, 1.0]);
    let mut argmax = 0.0;
    for k in 0..40 {
        for i in 0..16 {
            let s = (k as f64 + i as f64 / 16.0) * LN_2;
            let g = w.ln_g_exp(s);
            if g > running_max {
                running_max = g;
                argmax = s;
            }
            if running_max - g > best {
                best = running_max - g;
                witness = vec![argmax.exp(), s.exp()];
            }
        }
        levels.push(best);
    }
    let classification = classify_sup(&levels);
    let mut rec = record(Condition::AlmostIncreasing, best, witness, levels, classification);
    rec.note = "witness is (y, x)".into();
    rec
}

/// Runs every condition and combines them: admissible only if all are
/// bounded, not admissible if any diverges.
pub fn check_admissibility(w: &WeightSpec) -> AdmissibilityReport {
    let conditions = vec![check_a1(w), check_a2(w), check_a3(w), check_almost_increasing(w)];
    let verdict = if conditions.iter().any(|c| c.classification == Trend::Diverging) {
        Verdict::NotAdmissible
    } else if conditions.iter().all(|c| c.classification == Trend::Bounded) {
        Verdict::Admissible
    } else {
        Verdict::Inconclusive
    };
    AdmissibilityReport { weight: w.to_string(), eps0: w.eps0(), verdict, conditions }
}

/// The two suprema of the Möbius-invariance comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MobiusRatio {
    /// `sup_{x,y} g(1/(1-y))/g(1/(1-x)) (1-y^2)(1-x^2)/(1-xy)^2`
    pub lhs: f64,
    /// `sup_{t,x} t g(1/(t x)) / g(1/x)`
    pub rhs: f64,
    /// Log of the running suprema as the grid reaches `2^-k`.
    pub lhs_levels: Vec<f64>,
    pub rhs_levels: Vec<f64>,
    pub lhs_trend: Trend,
    pub rhs_trend: Trend,
}

/// Both sides of the Möbius comparison on log-spaced grids down to `2^-34`.
pub fn mobius_ratio_sup(w: &WeightSpec) -> Result<MobiusRatio> {
    const LEVELS: usize = 34;
    let pts: Vec<f64> = (1..=4 * LEVELS).map(|m| f64::powf(2.0, -(m as f64) / 4.0)).collect();
    let mut lhs_levels = vec![f64::NEG_INFINITY; LEVELS];
    let mut rhs_levels = vec![f64::NEG_INFINITY; LEVELS];
    for (i, &u) in pts.iter().enumerate() {
        for (j, &s) in pts.iter().enumerate() {
            let level = i.max(j) / 4;
            // u = 1 - x, s = 1 - y
            let geom = (s * (2.0 - s)).ln() + (u * (2.0 - u)).ln() - 2.0 * (u + s - u * s).ln();
            let l = w.ln_g_exp(-s.ln()) - w.ln_g_exp(-u.ln()) + geom;
            // t = u, x = s on (0, 1]
            let r = u.ln() + w.ln_g_exp(-u.ln() - s.ln()) - w.ln_g_exp(-s.ln());
            lhs_levels[level] = lhs_levels[level].max(l);
            rhs_levels[level] = rhs_levels[level].max(r);
        }
    }
    // t = 1 or x = 1 belong to the right-hand grid as well
    rhs_levels[0] = rhs_levels[0].max(0.0);
    for (i, &u) in pts.iter().enumerate() {
        let r = u.ln() + w.ln_g_exp(-u.ln()) - w.ln_g_exp(0.0);
        rhs_levels[i / 4] = rhs_levels[i / 4].max(r);
    }
    for k in 1..LEVELS {
        lhs_levels[k] = lhs_levels[k].max(lhs_levels[k - 1]);
        rhs_levels[k] = rhs_levels[k].max(rhs_levels[k - 1]);
    }
    if lhs_levels.iter().chain(&rhs_levels).any(|v| v.is_nan()) {
        return Err(Error::NonFinite(format!("Möbius ratio for {w}")));
    }
    Ok(MobiusRatio {
        lhs: lhs_levels[LEVELS - 1].exp(),
        rhs: rhs_levels[LEVELS - 1].exp(),
        lhs_trend: classify_sup(&lhs_levels),
        rhs_trend: classify_sup(&rhs_levels),
        lhs_levels,
        rhs_levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::parse_weight;

    fn w(text: &str) -> WeightSpec {
        parse_weight(text).unwrap()
    }

    #[test]
    fn a1_flat_for_critical_eps0() {
        // x g(1/x)^(2 + 1/c - 2) = x x^-1 = 1
        let r = check_a1(&w("power 0.4"));
        assert_eq!(r.classification, Trend::Bounded);
        assert!((r.estimate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn a1_power_half_diverges() {
        assert_eq!(check_a1(&w("power 0.5")).classification, Trend::Diverging);
    }

    #[test]
    fn a2_log_bound() {
        // (1+B) / ((1+B-A)(1+A)) tends to 1/(1 + ln(1/2)) as a -> 2, b -> 0
        let r = check_a2(&w("log 1"));
        assert_eq!(r.classification, Trend::Bounded);
        let limit = 1.0 / (1.0 - LN_2);
        assert!(r.estimate <= limit && r.estimate > 0.99 * limit, "{}", r.estimate);
        assert!(r.estimate <= 1.0 + 1.0 / (std::f64::consts::E / 2.0).ln());
    }

    #[test]
    fn a2_power_is_exactly_one() {
        let r = check_a2(&w("power 0.25"));
        assert!((r.estimate - 1.0).abs() < 1e-9);
        assert_eq!(r.classification, Trend::Bounded);
    }

    #[test]
    fn a2_fails_for_oscillating_and_staircase() {
        assert_eq!(check_a2(&w("coslog 0.1")).classification, Trend::Diverging);
        assert_eq!(check_a2(&w("staircase")).classification, Trend::Diverging);
    }

    #[test]
    fn a3_power_ratio_is_one() {
        let r = check_a3(&w("power 0.25"));
        assert!((r.estimate - 1.0).abs() < 1e-12);
        assert_eq!(r.classification, Trend::Bounded);
        assert!(r.estimate >= (-std::f64::consts::PI * 0.25 / 2.0).exp());
    }

    #[test]
    fn a3_without_extension_is_inconclusive() {
        assert_eq!(check_a3(&w("staircase")).classification, Trend::Inconclusive);
    }

    #[test]
    fn staircase_is_increasing() {
        let r = check_almost_increasing(&w("staircase"));
        assert!((r.estimate - 1.0).abs() < 1e-12);
        assert_eq!(r.classification, Trend::Bounded);
    }

    #[test]
    fn verdicts() {
        for text in ["const", "power 0.1", "power 0.25", "power 0.4", "log 0.5", "log 1", "log 2"] {
            assert_eq!(check_admissibility(&w(text)).verdict, Verdict::Admissible, "{text}");
        }
        assert_eq!(check_admissibility(&w("power 0.5")).verdict, Verdict::NotAdmissible);
        assert_eq!(check_admissibility(&w("coslog 0.1")).verdict, Verdict::NotAdmissible);
    }

    #[test]
    fn mobius_ratio_constant_weight() {
        let m = mobius_ratio_sup(&w("const")).unwrap();
        assert!((m.lhs - 1.0).abs() < 1e-12 && (m.rhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mobius_ratio_trends() {
        // rhs for Power(c) is sup t^(1-c): bounded for c <= 1
        let m = mobius_ratio_sup(&w("power 0.75")).unwrap();
        assert_eq!((m.lhs_trend, m.rhs_trend), (Trend::Bounded, Trend::Bounded), "{m:?}");
        assert!((m.rhs - 1.0).abs() < 1e-9);
        let m = mobius_ratio_sup(&w("power 1.5")).unwrap();
        assert_eq!((m.lhs_trend, m.rhs_trend), (Trend::Diverging, Trend::Diverging), "{m:?}");
    }
}
