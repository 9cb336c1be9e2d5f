//! The fixture symbols shared by tests, the acceptance suite and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::AnalyticMap;
use crate::cplx::c;
use crate::weights::WeightSpec;

/// Twenty symbols: six random polynomials of degree 1 to 6, four Möbius
/// maps, four finite Blaschke products and six h-primitives with scalar
/// modulus at most 0.9.
pub fn symbol_fixtures() -> Vec<AnalyticMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut out = Vec::new();
    for deg in 1..=6 {
        let coeffs = (0..=deg).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        out.push(AnalyticMap::polynomial(coeffs).expect("nonempty"));
    }
    for a in [c(0.5, 0.0), c(-0.3, 0.6), c(0.0, -0.9), c(0.7, 0.7)] {
        out.push(AnalyticMap::mobius(a).expect("inside the disk"));
    }
    out.push(AnalyticMap::blaschke(vec![c(0.5, 0.2)], 1).expect("valid zeros"));
    out.push(AnalyticMap::blaschke(vec![c(0.8, 0.0), c(-0.6, 0.3)], 0).expect("valid zeros"));
    out.push(AnalyticMap::blaschke(vec![c(0.0, 0.9), c(0.9, 0.0), c(-0.5, -0.5)], 2).expect("valid zeros"));
    out.push(AnalyticMap::blaschke(vec![c(0.95, 0.0)], 0).expect("valid zeros"));
    let weights = [
        WeightSpec::constant(),
        WeightSpec::power(0.25).expect("valid"),
        WeightSpec::log(1.0).expect("valid"),
        WeightSpec::log(0.5).expect("valid"),
    ];
    let scalars = [c(0.9, 0.0), c(0.0, 0.5), c(-0.6, 0.6), c(0.3, -0.8)];
    for (w, k) in weights.iter().zip(scalars) {
        out.push(AnalyticMap::hprimitive(w.clone(), k).expect("valid scalar"));
    }
    for (w, k) in weights.iter().zip(scalars).take(2) {
        out.push(AnalyticMap::hprimitive(w.clone(), k * 0.5).expect("valid scalar"));
    }
    out
}

/// The polynomial members of [`symbol_fixtures`].
pub fn polynomial_fixtures() -> Vec<AnalyticMap> {
    symbol_fixtures().into_iter().take(6).collect()
}

/// The admissible built-in weights.
pub fn admissible_weights() -> Vec<WeightSpec> {
    let mut out: Vec<WeightSpec> = [0.0, 0.1, 0.25, 0.4].iter().map(|&c| WeightSpec::power(c).expect("valid")).collect();
    out.extend([0.5, 1.0, 2.0].iter().map(|&c| WeightSpec::log(c).expect("valid")));
    out
}
