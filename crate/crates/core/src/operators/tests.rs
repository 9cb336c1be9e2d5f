use std::f64::consts::{LN_2, PI, TAU};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fixtures::{admissible_weights, symbol_fixtures};

fn cfg() -> QuadConfig {
    QuadConfig::default()
}

fn grid() -> DiskGrid {
    DiskGrid::new(24, 16).unwrap()
}

fn one() -> AnalyticMap {
    AnalyticMap::constant(c(1.0, 0.0))
}

fn poly(coeffs: &[f64]) -> AnalyticMap {
    AnalyticMap::polynomial(coeffs.iter().map(|x| c(*x, 0.0)).collect()).unwrap()
}

fn pair(psi: AnalyticMap, phi: AnalyticMap) -> SymbolPair {
    SymbolPair::new(psi, phi).unwrap()
}

fn log1() -> WeightSpec {
    WeightSpec::log(1.0).unwrap()
}

/// Trapezoid rule on the circle; spectrally accurate for smooth periodic data.
fn circle_mean(n: usize, f: impl Fn(Complex64) -> f64) -> f64 {
    (0..n).map(|k| f(Complex64::from_polar(1.0, TAU * k as f64 / n as f64))).sum::<f64>() / n as f64
}

fn sigma(a: Complex64, z: Complex64) -> Complex64 {
    (a - z) / (1.0 - a.conj() * z)
}

fn random_point(rng: &mut ChaCha8Rng, rmax: f64) -> Complex64 {
    Complex64::from_polar(rmax * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>())
}

#[test]
fn pair_rejects_non_self_maps() {
    assert!(SymbolPair::new(one(), poly(&[0.0, 1.0, 1.0])).is_err());
    assert!(SymbolPair::new(one(), AnalyticMap::constant(c(1.0, 0.0))).is_ok());
}

#[test]
fn recentred_symbol() {
    for a in [c(0.0, 0.0), c(0.5, 0.2), c(-0.9, 0.0)] {
        let id = phi_a(&AnalyticMap::identity(), a).unwrap();
        for z in [c(0.3, 0.1), c(-0.7, 0.2)] {
            assert!((id.eval(z).unwrap() - z).norm() < 1e-14);
        }
        assert!((hp_norm(&id, Exponent::Two, &cfg()).unwrap().value - 1.0).abs() < 1e-10);
        let k = phi_a(&AnalyticMap::constant(c(0.2, -0.4)), a).unwrap();
        assert!(k.eval(c(0.5, 0.5)).unwrap().norm() < 1e-15);
    }
    for f in symbol_fixtures() {
        if f.check_self_map().is_err() {
            continue;
        }
        let a = c(0.4, -0.3);
        assert!(phi_a(&f, a).unwrap().eval(c(0.0, 0.0)).unwrap().norm() < 1e-10, "{f}");
    }
}

#[test]
fn half_map_recentred_norm() {
    let half = AnalyticMap::halfmap();
    for a in [c(0.0, 0.0), c(0.5, 0.0), c(0.9, 0.0), c(0.5, 0.3), c(0.99, 0.0)] {
        let closed = (1.0 - a.norm_sqr()) / (2.0 * (1.0 - a.re));
        let b = (1.0 + a) / 2.0;
        let direct = circle_mean(200_000, |z| {
            sigma(b, (1.0 + z) / 2.0).norm_sqr() * (1.0 - a.norm_sqr()) / (1.0 - a.conj() * z).norm_sqr()
        });
        assert!((direct - closed).abs() < 1e-9, "oracle disagrees at {a}");
        let got = hp_norm(&phi_a(&half, a).unwrap(), Exponent::Two, &cfg()).unwrap().value.powi(2);
        assert!((got - closed).abs() < 1e-4 * closed, "{a}: {got} vs {closed}");
    }
}

#[test]
fn alpha_examples() {
    let id = AnalyticMap::identity();
    for w in admissible_weights() {
        for a in [c(0.0, 0.0), c(0.7, -0.2), c(0.0, 0.999)] {
            assert!((alpha(&one(), &id, &w, a, &cfg()).unwrap() - 1.0).abs() < 1e-9);
        }
    }
    let zero = AnalyticMap::constant(c(0.0, 0.0));
    assert_eq!(alpha(&zero, &AnalyticMap::halfmap(), &log1(), c(0.3, 0.0), &cfg()).unwrap(), 0.0);
    let got = alpha(&one(), &AnalyticMap::halfmap(), &WeightSpec::constant(), c(0.9, 0.0), &cfg()).unwrap();
    assert!((got - 0.95f64.sqrt()).abs() < 1e-6, "{got}");
    assert!(alpha(&one(), &id, &log1(), c(1.0, 0.0), &cfg()).is_err());
}

#[test]
fn beta_examples() {
    let w = WeightSpec::constant();
    let half = AnalyticMap::halfmap();
    for k in [c(0.0, 0.0), c(2.0, -1.0)] {
        assert_eq!(beta(&AnalyticMap::constant(k), &half, &log1(), c(0.5, 0.5), &cfg()).unwrap(), 0.0);
    }
    // gamma(z, a, 1) = (1 - |a|^2) * mean of 1 / |1 - conj(a) z|
    let zmap = AnalyticMap::identity();
    let origin = AnalyticMap::constant(c(0.0, 0.0));
    for a in [c(0.0, 0.0), c(0.5, 0.0), c(-0.3, 0.8), c(0.95, 0.0)] {
        let oracle = (1.0 - a.norm_sqr()) * circle_mean(100_000, |z| 1.0 / (1.0 - a.conj() * z).norm());
        let got = beta(&zmap, &origin, &w, a, &cfg()).unwrap();
        assert!((got - oracle).abs() < 1e-7 * oracle, "{a}: {got} vs {oracle}");
        assert!(got <= (1.0 - a.norm_sqr()).sqrt() + 1e-12);
    }
    let got = beta(&poly(&[1.0, -1.0]), &half, &w, c(0.0, 0.0), &cfg()).unwrap();
    assert!((got - (1.0 + LN_2)).abs() < 1e-8, "{got}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn alpha_is_homogeneous(r in 0.0..0.999f64, t in 0.0..TAU, lr in -3.0..3.0f64, lt in 0.0..TAU) {
        let a = Complex64::from_polar(r, t);
        let lam = Complex64::from_polar(lr.exp(), lt);
        let psi = poly(&[1.0, 0.5, -0.25]);
        let half = AnalyticMap::halfmap();
        let w = WeightSpec::power(0.25).unwrap();
        let base = alpha(&psi, &half, &w, a, &cfg()).unwrap();
        let scaled = alpha(&psi.scale(lam), &half, &w, a, &cfg()).unwrap();
        prop_assert!((scaled - lam.norm() * base).abs() <= 1e-13 * scaled.max(1e-300));
    }

    #[test]
    fn beta_vanishes_for_constants(r in 0.0..0.999999f64, t in 0.0..TAU, re in -5.0..5.0f64, im in -5.0..5.0f64) {
        let a = Complex64::from_polar(r, t);
        let k = AnalyticMap::constant(c(re, im));
        prop_assert_eq!(beta(&k, &AnalyticMap::halfmap(), &log1(), a, &cfg()).unwrap(), 0.0);
    }
}

#[test]
fn alpha_test_function_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let weights = admissible_weights();
    for i in 0..50 {
        let w = &weights[i % weights.len()];
        let b = random_point(&mut rng, 0.99);
        let at = random_point(&mut rng, 0.99);
        let f = AnalyticMap::mobius(b).unwrap().shift(-b).scale(c(1.0 / w.v(b).unwrap(), 0.0));
        let got = gamma_boundary_unchecked(&f, at, 2.0, &cfg()).unwrap().value.powi(2);
        let want = (1.0 - sigma(b, at).norm_sqr()) / w.v(b).unwrap().powi(2);
        assert!((got - want).abs() <= 1e-4 * want, "b={b} at={at}: {got} vs {want}");
    }
}

#[test]
fn alpha_test_function() {
    let g = DiskGrid::new(16, 16).unwrap();
    let t = test_fn_alpha(c(0.0, 0.0), &WeightSpec::constant(), &g, &cfg()).unwrap();
    assert!((t.norm - 1.0).abs() < 1e-9);
    let w = WeightSpec::power(0.25).unwrap();
    let mut last = f64::INFINITY;
    for k in [1, 3, 6, 9, 12] {
        let b = c(1.0 - (-(k as f64)).exp2(), 0.0);
        let t = test_fn_alpha(b, &w, &g, &cfg()).unwrap();
        assert!(t.norm >= 1.0 - 1e-9, "{b}: {}", t.norm);
        let renorm = seminorm(&t.normalized, &w, Exponent::Two, &g, &cfg()).unwrap().norm;
        assert!((renorm - 1.0).abs() < 1e-9);
        let h2 = hp_norm(&t.normalized, Exponent::Two, &cfg()).unwrap().value;
        assert!(h2 < last);
        last = h2;
    }
    assert!(last < 0.05, "{last}");
}

#[test]
fn beta_test_function() {
    let g = DiskGrid::new(16, 16).unwrap();
    let w = WeightSpec::constant();
    let t = test_fn_beta(c(0.0, 0.0), &w, &g, &cfg()).unwrap();
    assert!((t.norm - 1.0).abs() < 1e-12);
    assert!((t.normalized.eval(c(0.4, 0.4)).unwrap() - 1.0).norm() < 1e-12);
    let t = test_fn_beta(c(0.9, 0.0), &w, &g, &cfg()).unwrap();
    assert!(t.ratio > 1.0 / 20.0 && t.ratio < 20.0, "{}", t.ratio);
    // constant weight: h(bz) = -ln(1 - bz), so ||h(b .)||^2 = sum |b|^{2n} / n^2
    for k in [2, 6, 12, 20] {
        let b = 1.0 - (-(k as f64)).exp2();
        let series: f64 = (1..200_000).map(|n| b.powi(2 * n) / (n as f64).powi(2)).sum();
        let got = hp_norm(&AnalyticMap::hprimitive(w.clone(), c(b, 0.0)).unwrap(), Exponent::Two, &cfg()).unwrap().value;
        assert!((got * got - series).abs() < 1e-4, "{b}: {} vs {series}", got * got);
        assert!(got * got <= PI * PI / 6.0);
    }
}

#[test]
fn apply_examples() {
    let pts = [c(0.1, 0.2), c(-0.5, 0.3), c(0.0, -0.9), c(0.7, 0.0), c(0.3, 0.3)];
    let f = poly(&[0.5, -1.0, 2.0]);
    let p = pair(one(), AnalyticMap::identity());
    let q = pair(AnalyticMap::constant(c(2.0, 0.0)), AnalyticMap::constant(c(0.0, 0.0)));
    let r = pair(poly(&[1.0, -1.0]), AnalyticMap::halfmap());
    for z in pts {
        assert!((apply_wco(&p, &f).eval(z).unwrap() - f.eval(z).unwrap()).norm() < 1e-14);
        assert!((apply_wco(&q, &f).eval(z).unwrap() - 2.0 * f.eval(c(0.0, 0.0)).unwrap()).norm() < 1e-14);
        let want = (1.0 - z) * (1.0 + z) / 2.0;
        assert!((apply_wco(&r, &AnalyticMap::identity()).eval(z).unwrap() - want).norm() < 1e-14);
    }
}

#[test]
fn identity_profile() {
    let p = pair(one(), AnalyticMap::identity());
    for w in [WeightSpec::power(0.25).unwrap(), log1()] {
        let prof = alpha_beta_profile(&p, &w, &DiskGrid::new(20, 8).unwrap(), &cfg()).unwrap();
        assert!(prof.rows.iter().all(|r| (r.alpha.unwrap() - 1.0).abs() < 1e-9 && r.beta == Some(0.0)));
        let v = bounded_from_profile(&prof, DEFAULT_BUDGET);
        assert_eq!(v.kind, VerdictKind::Bounded);
        assert!((v.estimate.unwrap() - 2.0).abs() < 1e-9);
        for t in &prof.thresholds {
            assert_eq!(t.total.is_none(), t.count == 0);
            assert!(t.total.is_none_or(|x| x <= prof.sup_alpha + prof.sup_beta + 1e-12));
        }
        assert_eq!(prof.thresholds.last().unwrap().count, 0);
    }
}

#[test]
fn zero_multiplier() {
    let p = pair(AnalyticMap::constant(c(0.0, 0.0)), AnalyticMap::halfmap());
    let a = assess(&p, &log1(), &grid(), &cfg()).unwrap();
    assert_eq!(a.bounded.kind, VerdictKind::Bounded);
    assert_eq!(a.bounded.estimate, Some(0.0));
    assert_eq!(a.compact.kind, VerdictKind::Compact);
    assert!(!a.compact.witnesses.is_empty());
    let v = vmoa_boundedness_verdict(&p, &log1(), &DiskGrid::new(12, 8).unwrap(), &cfg());
    assert_eq!(v.kind, VerdictKind::Bounded);
}

#[test]
fn half_map_is_bounded_not_compact() {
    for w in [WeightSpec::constant(), log1()] {
        let a = assess(&pair(one(), AnalyticMap::halfmap()), &w, &grid(), &cfg()).unwrap();
        assert_eq!(a.bounded.kind, VerdictKind::Bounded, "{w}");
        assert_eq!(a.compact.kind, VerdictKind::NoncompactEvidence, "{w}");
        assert!(a.compact.limsup.unwrap() > 0.5);
        assert!(a.profile.sup_alpha.is_finite());
    }
}

#[test]
fn product_with_half_map_is_compact() {
    let p = pair(poly(&[1.0, -1.0]), AnalyticMap::halfmap());
    let a = assess(&p, &log1(), &grid(), &cfg()).unwrap();
    assert_eq!(a.bounded.kind, VerdictKind::Bounded);
    assert_eq!(a.compact.kind, VerdictKind::Compact, "{:?}", a.compact.diagnostics);
    assert!(a.compact.estimate.is_some() && !a.compact.witnesses.is_empty());
    // the multiplier vanishes at the only boundary contact point
    let base = alpha_beta_profile(&pair(one(), AnalyticMap::halfmap()), &log1(), &grid(), &cfg()).unwrap();
    for (x, y) in a.profile.rows.iter().zip(&base.rows) {
        let want = (1.0 - x.point).norm() * y.alpha.unwrap();
        assert!((x.alpha.unwrap() - want).abs() <= 1e-12 * want.max(1e-300));
    }
}

#[test]
fn multiplication_operator_is_not_compact() {
    let p = pair(poly(&[1.0, 0.5]), AnalyticMap::identity());
    let a = assess(&p, &log1(), &grid(), &cfg()).unwrap();
    assert_eq!(a.bounded.kind, VerdictKind::Bounded);
    assert_eq!(a.compact.kind, VerdictKind::NoncompactEvidence);
    assert!((a.compact.limsup.unwrap() - 1.5).abs() < 0.01);
}

#[test]
fn truncated_blaschke_grows_along_zeros() {
    let w = log1();
    let zeros: Vec<Complex64> = (1..=12).map(|k| c(1.0 - (-(k as f64)).exp2(), 0.0)).collect();
    let b = AnalyticMap::blaschke(zeros.clone(), 0).unwrap();
    let along: Vec<f64> = zeros.iter().map(|z| alpha(&one(), &b, &w, *z, &cfg()).unwrap()).collect();
    for (k, (z, a)) in zeros.iter().zip(&along).enumerate() {
        let want = w.v(*z).unwrap() / w.v(c(0.0, 0.0)).unwrap();
        assert!((a - want).abs() < 1e-8 * want, "k={}: {a} vs {want}", k + 1);
    }
    // log weight: the growth from k = 4 to k = 12 is (1 + 12 ln 2) / (1 + 4 ln 2)
    let ratio = along[11] / along[3];
    assert!((ratio - (1.0 + 12.0 * LN_2) / (1.0 + 4.0 * LN_2)).abs() < 1e-8);
    let v = boundedness_verdict(&pair(one(), b), &w, &DiskGrid::new(12, 16).unwrap(), &cfg(), DEFAULT_BUDGET);
    assert_eq!(v.kind, VerdictKind::UnboundedEvidence);
    assert!(!v.witnesses.is_empty());
}

#[test]
fn budget_triggers_divergence() {
    let p = pair(AnalyticMap::constant(c(1e7, 0.0)), AnalyticMap::identity());
    let v = boundedness_verdict(&p, &log1(), &DiskGrid::new(4, 8).unwrap(), &cfg(), DEFAULT_BUDGET);
    assert_eq!(v.kind, VerdictKind::UnboundedEvidence);
    assert_eq!(v.witnesses.len(), 1);
}

#[test]
fn vanishing_subspace_checks() {
    let g = DiskGrid::new(24, 8).unwrap();
    let w = WeightSpec::power(0.25).unwrap();
    let v = vmoa_boundedness_verdict(&pair(one(), AnalyticMap::halfmap()), &w, &g, &cfg());
    assert_eq!(v.kind, VerdictKind::Bounded, "{:?}", v.diagnostics);
    let h = AnalyticMap::hprimitive(w.clone(), c(1.0, 0.0)).unwrap();
    let p = pair(h, AnalyticMap::identity().scale(c(0.5, 0.0)));
    assert_eq!(boundedness_verdict(&p, &w, &g, &cfg(), DEFAULT_BUDGET).kind, VerdictKind::Bounded);
    let v = vmoa_boundedness_verdict(&p, &w, &g, &cfg());
    assert_eq!(v.kind, VerdictKind::UnboundedEvidence, "{:?}", v.diagnostics);
    assert_eq!(v.diagnostics["psi_vanishing_tail"], "bounded");
}

#[test]
fn interior_symbol_uses_radial_route() {
    let p = pair(poly(&[1.0, 0.5]), AnalyticMap::identity().scale(c(0.5, 0.0)));
    let a = assess(&p, &log1(), &grid(), &cfg()).unwrap();
    assert_eq!(a.bounded.kind, VerdictKind::Bounded);
    assert_eq!(a.compact.kind, VerdictKind::Compact, "{:?}", a.compact.diagnostics);
    assert!(a.compact.diagnostics["route"].starts_with("interior"));
}

#[test]
fn test_function_profile_tracks_symbol_profile() {
    let outer = DiskGrid::new(20, 8).unwrap();
    let inner = DiskGrid::new(12, 8).unwrap();
    let w = log1();
    let zero = test_function_profile(&pair(AnalyticMap::constant(c(0.0, 0.0)), AnalyticMap::halfmap()), &w, &outer, &inner, &cfg()).unwrap();
    assert!(zero.rows.iter().all(|r| r.image_norm == Some(0.0) && r.beta == Some(0.0)));
    let totals = |p: &TestFnProfile| p.thresholds.iter().filter_map(|t| t.total).collect::<Vec<f64>>();
    let compact = totals(&test_function_profile(&pair(poly(&[1.0, -1.0]), AnalyticMap::halfmap()), &w, &outer, &inner, &cfg()).unwrap());
    let fixed = totals(&test_function_profile(&pair(one(), AnalyticMap::halfmap()), &w, &outer, &inner, &cfg()).unwrap());
    assert!(compact.len() >= 4 && compact.windows(2).all(|p| p[1] <= p[0]));
    assert!(compact[compact.len() - 1] < 1e-2 * compact[0]);
    assert!(fixed.iter().all(|x| *x > 0.3), "{fixed:?}");
}

#[test]
fn power_comparison() {
    let g = DiskGrid::new(16, 16).unwrap();
    let w = WeightSpec::power(0.25).unwrap();
    let half = AnalyticMap::halfmap();
    let p1 = phi_power_profile(&half, &w, 1, &g, &cfg()).unwrap();
    assert!(p1.rows.iter().all(|r| r.ratio <= 1.0 + 1e-9));
    let p2 = phi_power_profile(&half, &w, 2, &g, &cfg()).unwrap();
    assert!(!p2.violation && p2.constant > 0.0, "{}", p2.constant);
    assert!((p2.c0 - p2.eps0 / (2.0 * (1.0 + p2.eps0))).abs() < 1e-15);
    let k = phi_power_profile(&AnalyticMap::constant(c(0.3, 0.0)), &w, 3, &g, &cfg()).unwrap();
    assert!(k.rows.iter().all(|r| r.power_norm < 1e-20));
    assert!(phi_power_profile(&half, &w, 0, &g, &cfg()).is_err());
    assert!(phi_power_profile(&half, &w, 6, &g, &cfg()).is_err());
}

#[test]
fn norm_formula_dominates_rayleigh_bound() {
    let g = DiskGrid::new(16, 16).unwrap();
    let w = log1();
    let fs: Vec<AnalyticMap> = symbol_fixtures().into_iter().take(10).collect();
    for p in [
        pair(one(), AnalyticMap::halfmap()),
        pair(poly(&[1.0, -1.0]), AnalyticMap::halfmap()),
        pair(poly(&[1.0, 0.5]), AnalyticMap::identity()),
    ] {
        let formula = alpha_beta_profile(&p, &w, &g, &cfg()).unwrap().norm_estimate;
        let lower = rayleigh_lower_bound(&p, &w, &fs, &g, &cfg()).unwrap().lower;
        assert!(lower > 0.0 && lower <= 100.0 * formula, "{lower} vs {formula}");
    }
}

#[test]
fn psi_oscillation_is_controlled_by_beta() {
    let g = DiskGrid::new(16, 16).unwrap();
    let w = WeightSpec::power(0.25).unwrap();
    let p = pair(poly(&[0.2, 0.5, 0.3]), AnalyticMap::halfmap());
    let prof = alpha_beta_profile(&p, &w, &g, &cfg()).unwrap();
    assert_eq!(bounded_from_profile(&prof, DEFAULT_BUDGET).kind, VerdictKind::Bounded);
    let min_eval = prof.rows.iter().map(|r| w.eval_norm(c(r.phi_abs, 0.0)).unwrap()).fold(f64::INFINITY, f64::min);
    let osc = seminorm(p.psi(), &w, Exponent::One, &g, &cfg()).unwrap().sup;
    assert!(osc <= prof.sup_beta / min_eval * (1.0 + 1e-12));
}

#[test]
fn automorphism_distortion() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for w in admissible_weights() {
        let mut k = 0.0f64;
        for _ in 0..100 {
            let a = random_point(&mut rng, 0.999);
            let z = random_point(&mut rng, 0.999);
            let lhs = w.g(1.0 / (1.0 - sigma(a, z).norm()));
            let rhs = w.g((1.0 + a.norm()) / (1.0 - a.norm())) * w.g(1.0 / (1.0 - z.norm()));
            k = k.max(lhs / rhs);
        }
        assert!(k <= 100.0, "{w}: {k}");
    }
}

#[test]
fn profile_is_thread_independent() {
    let p = pair(poly(&[1.0, -1.0]), AnalyticMap::halfmap());
    let g = DiskGrid::new(10, 8).unwrap();
    let run = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| assess(&p, &log1(), &g, &cfg()).unwrap())
    };
    assert_eq!(run(1), run(4));
}
