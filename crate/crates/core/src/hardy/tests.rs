use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::weights::WeightSpec;

fn cfg() -> QuadConfig {
    QuadConfig::default()
}

fn poly(cs: &[f64]) -> AnalyticMap {
    AnalyticMap::polynomial(cs.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn fixtures() -> Vec<AnalyticMap> {
    crate::fixtures::symbol_fixtures()
}

#[test]
fn config_validation() {
    assert!(QuadConfig::new(1024, 30, 1e-6, 3).is_ok());
    assert!(QuadConfig::new(1000, 30, 1e-6, 3).is_err());
    assert!(QuadConfig::new(8, 30, 1e-6, 3).is_err());
    assert!(QuadConfig::new(1024, 7, 1e-6, 3).is_err());
    assert!(QuadConfig::new(1024, 30, 0.1, 3).is_err());
    assert_eq!("2".parse::<Exponent>().unwrap(), Exponent::Two);
    assert!("3".parse::<Exponent>().is_err());
}

#[test]
fn hp_norm_trivial_cases() {
    let k = AnalyticMap::constant(c(0.6, -0.8));
    for p in [Exponent::One, Exponent::Two] {
        assert!((hp_norm(&k, p, &cfg()).unwrap().value - 1.0).abs() < 1e-13);
    }
    assert!((hp_norm(&poly(&[0.0, 1.0]), Exponent::Two, &cfg()).unwrap().value - 1.0).abs() < 1e-13);
    assert!((hp_norm(&poly(&[1.0, 1.0]), Exponent::Two, &cfg()).unwrap().value - 2f64.sqrt()).abs() < 1e-13);
    // mean of |1 + e^{it}| = mean of 2|cos(t/2)| = 4/pi
    assert!((hp_norm(&poly(&[1.0, 1.0]), Exponent::One, &cfg()).unwrap().value - 4.0 / PI).abs() < 1e-9);
}

#[test]
fn parseval_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for deg in 0..=8 {
        let coeffs: Vec<_> = (0..=deg).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let f = AnalyticMap::polynomial(coeffs).unwrap();
        let tc = f.taylor_coeffs(deg, 0.9).unwrap();
        let want = tc.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let got = hp_norm(&f, Exponent::Two, &cfg()).unwrap().value;
        assert!((got - want).abs() <= 1e-8, "deg {deg}: {got} vs {want}");
    }
}

#[test]
fn singular_boundary_norm() {
    // -log(1 - z) = sum z^n / n, so its H^2 norm squared is pi^2 / 6
    let h = AnalyticMap::hprimitive(WeightSpec::constant(), c(1.0, 0.0)).unwrap();
    let est = hp_norm(&h, Exponent::Two, &cfg()).unwrap();
    assert!(est.is_converged());
    assert!((est.value - PI / 6f64.sqrt()).abs() < 1e-8, "{}", est.value);
}

#[test]
fn radius_schedule_norm() {
    // h((1 + z) / 2) = ln 2 - log(1 - z) has no listed boundary behaviour
    let h = AnalyticMap::hprimitive(WeightSpec::constant(), c(1.0, 0.0)).unwrap();
    let g = AnalyticMap::compose(h, AnalyticMap::halfmap());
    assert_eq!(g.boundary(), Boundary::Unknown);
    let est = hp_norm(&g, Exponent::Two, &cfg()).unwrap();
    let want = (2f64.ln().powi(2) + PI * PI / 6.0).sqrt();
    assert!(est.is_converged(), "{est:?}");
    assert!(est.radii_used > 8);
    assert!(rel(est.value, want) < 1e-5, "{} vs {want}", est.value);
}

#[test]
fn poisson_kernel_examples() {
    assert!((poisson_kernel(c(0.0, 0.0), c(0.0, 1.0)).unwrap() - 1.0).abs() < 1e-15);
    assert!((poisson_kernel(c(0.9, 0.0), c(1.0, 0.0)).unwrap() - 19.0).abs() < 1e-12);
    let a = c(0.7, 0.2);
    let m = 1 << 10;
    let mean: f64 =
        (0..m).map(|k| poisson_kernel(a, Complex64::from_polar(1.0, TAU * k as f64 / m as f64)).unwrap()).sum::<f64>()
            / m as f64;
    assert!((mean - 1.0).abs() < 1e-10);
    assert!(poisson_kernel(c(1.0, 0.0), c(1.0, 0.0)).is_err());
    assert!(poisson_kernel(c(0.1, 0.0), c(1.1, 0.0)).is_err());
}

#[test]
fn oscillation_of_identity() {
    for a in [c(0.0, 0.0), c(0.5, 0.3), c(-0.9, 0.0), c(0.0, 0.999), c(0.99999, 0.0)] {
        let want = (1.0 - a.norm_sqr()).sqrt();
        let got = gamma_boundary(&AnalyticMap::identity(), a, Exponent::Two, &cfg()).unwrap();
        assert!(rel(got.value, want) < 1e-8, "{a}: {} vs {want}", got.value);
    }
    let k = AnalyticMap::constant(c(3.0, 1.0));
    assert_eq!(gamma_boundary(&k, c(0.4, 0.0), Exponent::One, &cfg()).unwrap().value, 0.0);
}

#[test]
fn area_route_calibration() {
    let id = AnalyticMap::identity();
    assert!((gamma_area_p2(&id, c(0.0, 0.0), &cfg()).unwrap().value - 1.0).abs() < 1e-9);
    let a = c(0.6, -0.3);
    let got = gamma_area_p2(&id, a, &cfg()).unwrap().value;
    assert!(rel(got, 1.0 - a.norm_sqr()) < 1e-6, "{got}");
    // the oscillation of z^2 about 0 is ||z^2||^2 = 1
    let z2 = poly(&[0.0, 0.0, 1.0]);
    let area = gamma_area_p2(&z2, c(0.0, 0.0), &cfg()).unwrap().value;
    let bdry = gamma_boundary(&z2, c(0.0, 0.0), Exponent::Two, &cfg()).unwrap().value;
    assert!((area - 1.0).abs() < 1e-8 && (bdry - 1.0).abs() < 1e-12);
}

#[test]
fn two_estimators_agree() {
    let points = [c(0.0, 0.0), c(0.5, -0.5), c(-0.95, 0.0), c(0.3, 0.9)];
    for f in fixtures() {
        for &a in &points {
            let g = gamma_boundary(&f, a, Exponent::Two, &cfg()).unwrap().value;
            let area = gamma_area_p2(&f, a, &cfg()).unwrap();
            assert!((area.value - g * g).abs() <= 0.02 * g * g, "{f} at {a}: {} vs {}", area.value, g * g);
        }
    }
}

#[test]
fn holder_monotonicity() {
    let points = [c(0.2, 0.1), c(-0.7, 0.6), c(0.0, -0.95)];
    for f in fixtures() {
        for &a in &points {
            let g1 = gamma_boundary(&f, a, Exponent::One, &cfg()).unwrap().value;
            let g2 = gamma_boundary(&f, a, Exponent::Two, &cfg()).unwrap().value;
            assert!(g1 <= g2 * (1.0 + 1e-9), "{f} at {a}: {g1} > {g2}");
        }
    }
}

#[test]
fn rotation_invariance() {
    for f in fixtures() {
        let base = hp_norm(&f, Exponent::Two, &cfg()).unwrap().value;
        for t in [0.3, 2.0, -1.1] {
            let rotated = AnalyticMap::dilate(f.clone(), Complex64::from_polar(1.0, t)).unwrap();
            let v = hp_norm(&rotated, Exponent::Two, &cfg()).unwrap().value;
            assert!((v - base).abs() <= 1e-8 * base.max(1.0), "{f}: {v} vs {base}");
        }
    }
}

#[test]
fn composition_bound() {
    let vanishing: Vec<_> = fixtures().into_iter().filter(|f| f.eval(c(0.0, 0.0)).unwrap().norm() < 1e-15).collect();
    let selfmaps = vec![
        AnalyticMap::identity(),
        poly(&[0.0, 0.5, 0.5]),
        AnalyticMap::blaschke(vec![c(0.5, 0.5)], 1).unwrap(),
        AnalyticMap::compose(AnalyticMap::mobius(c(0.3, 0.0)).unwrap(), AnalyticMap::mobius(c(0.3, 0.0)).unwrap()),
    ];
    let mut worst = 0.0f64;
    for f in &vanishing {
        let nf = hp_norm(f, Exponent::Two, &cfg()).unwrap().value;
        for u in &selfmaps {
            let nu = hp_norm(u, Exponent::Two, &cfg()).unwrap().value;
            let fu = AnalyticMap::compose(f.clone(), u.clone());
            let v = hp_norm(&fu, Exponent::Two, &cfg()).unwrap().value;
            worst = worst.max(v / (nf * nu));
        }
    }
    assert!(!vanishing.is_empty() && worst <= 10.0, "{worst}");
}

#[test]
fn dilation_contraction() {
    let w = WeightSpec::power(0.25).unwrap();
    // twelve angles per circle, so the rotation by pi/3 permutes the grid
    let grid: Vec<Complex64> = (0..8)
        .flat_map(|j| {
            let r = 1.0 - (-(j as f64)).exp2();
            (0..12).map(move |k| Complex64::from_polar(r, TAU * k as f64 / 12.0 + 0.1))
        })
        .collect();
    let sup = |f: &AnalyticMap| {
        grid.iter()
            .map(|&a| w.v(a).unwrap() * gamma_boundary_unchecked(f, a, 2.0, &cfg()).unwrap().value)
            .fold(0.0, f64::max)
    };
    for f in fixtures().into_iter().step_by(3) {
        let base = sup(&f);
        for k in [c(0.5, 0.0), c(0.9, 0.0), Complex64::from_polar(1.0, PI / 3.0)] {
            let d = sup(&AnalyticMap::dilate(f.clone(), k).unwrap());
            assert!(d <= base * (1.0 + 1e-6), "{f} dilated by {k}: {d} > {base}");
        }
    }
}

#[test]
fn singular_oscillation_routes_agree() {
    // checked route raises a fault on disagreement
    let h = AnalyticMap::hprimitive(WeightSpec::power(0.25).unwrap(), c(1.0, 0.0)).unwrap();
    for a in [c(0.0, 0.0), c(0.9, 0.0), c(-0.5, 0.5), c(0.999, 0.0)] {
        for p in [Exponent::One, Exponent::Two] {
            gamma_boundary(&h, a, p, &cfg()).unwrap();
        }
    }
}

#[test]
fn arc_eta_examples() {
    let full = ArcSpec::new(0.0, 1.0).unwrap();
    let k = AnalyticMap::constant(c(1.0, 2.0));
    assert_eq!(arc_eta(&k, full, Exponent::Two, &cfg()).unwrap().value, 0.0);
    let id = AnalyticMap::identity();
    assert!((arc_eta(&id, full, Exponent::Two, &cfg()).unwrap().value - 1.0).abs() < 1e-10);

    // half circle centered at 1, p = 1, against a 10^6 point midpoint sum
    let n = 1_000_000;
    let h = PI / n as f64;
    let nodes = (0..n).map(|i| -FRAC_PI_2 + (i as f64 + 0.5) * h);
    let mean = nodes.clone().map(|t| Complex64::from_polar(1.0, t)).sum::<Complex64>() / n as f64;
    let oracle = nodes.map(|t| (Complex64::from_polar(1.0, t) - mean).norm()).sum::<f64>() / n as f64;
    let half = ArcSpec::new(0.0, 0.5).unwrap();
    let got = arc_eta(&id, half, Exponent::One, &cfg()).unwrap().value;
    assert!((got - oracle).abs() < 1e-9, "{got} vs {oracle}");
    assert!(ArcSpec::new(0.0, 0.0).is_err() && ArcSpec::new(0.0, 1.5).is_err());
}
