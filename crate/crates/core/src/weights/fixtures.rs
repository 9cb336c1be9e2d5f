//! Registered custom generators.

use std::sync::OnceLock;

use num_complex::Complex64;

use super::{Generator, WeightSpec};
use crate::cplx::c;

/// `g(x) = (e + x)^(c * exp(cos(ln ln(e + x))))`.
///
/// Grows no faster than `x^(c e)`, but its oscillating exponent breaks the
/// submultiplicativity condition for `0 < c < 1/(2e)`.
#[derive(Debug, Clone, Copy)]
pub struct CosLog {
    pub c: f64,
}

impl CosLog {
    fn ln_e_plus_exp(s: f64) -> f64 {
        // ln(e + e^s)
        if s > 1.0 {
            s + (1.0 - s).exp().ln_1p()
        } else {
            1.0 + (s - 1.0).exp().ln_1p()
        }
    }
}

impl Generator for CosLog {
    fn describe(&self) -> String {
        format!("coslog {}", self.c)
    }

    fn ln_g_exp(&self, s: f64) -> f64 {
        let l = Self::ln_e_plus_exp(s);
        self.c * l.ln().cos().exp() * l
    }

    fn g_complex(&self, z: Complex64) -> Option<Complex64> {
        let l = (c(std::f64::consts::E, 0.0) + z).ln();
        let exponent = l.ln().cos().exp() * self.c;
        Some((l * exponent).exp())
    }

    fn default_eps0(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// Increasing step function built from `G(x) = x`: constant on
/// `[x_n + 1, x_{n+1}]`, rising linearly on `[x_n, x_n + 1]`, with
/// `x_1 = 2` and `x_{n+1} = (n + 1)(x_n + 1)`. It satisfies
/// `g(2 x_n) / g(x_n) >= n`.
#[derive(Debug, Default)]
pub struct Staircase {
    // ln x_n for n = 1, 2, ...
    knots: OnceLock<Vec<f64>>,
}

const STAIRCASE_LOG_LIMIT: f64 = 4.0e6;

impl Staircase {
    pub fn new() -> Self {
        Self::default()
    }

    fn knots(&self) -> &[f64] {
        self.knots.get_or_init(|| {
            let mut out = vec![2f64.ln()];
            let mut n = 1.0;
            while *out.last().unwrap() < STAIRCASE_LOG_LIMIT {
                let last = *out.last().unwrap();
                let ln_plus_one = last + (-last).exp().ln_1p();
                n += 1.0;
                out.push(f64::ln(n) + ln_plus_one);
            }
            out
        })
    }

    /// The knots `x_n` that are representable as `f64`.
    pub fn finite_knots(&self) -> Vec<f64> {
        self.knots().iter().map(|l| l.exp()).take_while(|x| x.is_finite()).collect()
    }

    fn ln_plus_one(l: f64) -> f64 {
        l + (-l).exp().ln_1p()
    }
}

impl Generator for Staircase {
    fn describe(&self) -> String {
        "staircase".into()
    }

    fn ln_g_exp(&self, s: f64) -> f64 {
        let knots = self.knots();
        // index of the last knot <= s
        let idx = match knots.binary_search_by(|k| k.total_cmp(&s)) {
            Ok(i) => i,
            Err(0) => return 0.0,
            Err(i) => i - 1,
        };
        let lo = if idx == 0 { 0.0 } else { Self::ln_plus_one(knots[idx - 1]) };
        let hi = Self::ln_plus_one(knots[idx]);
        // position inside the rising part [x_n, x_n + 1]: t = x - x_n
        let ln_t = knots[idx] + (s - knots[idx]).exp_m1().ln();
        if ln_t >= 0.0 {
            return hi;
        }
        let t = ln_t.exp();
        lo + (t * (hi - lo).exp_m1()).ln_1p()
    }

    fn default_eps0(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// `w(a) = v(a) (1 + h(|a|))`, as a generator: `g(x) (1 + H(ln x))` for
/// `x >= 1` and `g(x)` below.
#[derive(Debug, Clone)]
pub struct Derived {
    pub base: WeightSpec,
}

impl Generator for Derived {
    fn describe(&self) -> String {
        format!("derived ({})", self.base)
    }

    fn ln_g_exp(&self, s: f64) -> f64 {
        let g = self.base.ln_g_exp(s);
        if s <= 0.0 {
            return g;
        }
        match self.base.real_primitive(s) {
            Ok(h) => g + h.ln_1p(),
            Err(_) => f64::NAN,
        }
    }

    fn default_eps0(&self) -> Option<f64> {
        Some(self.base.eps0())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coslog_log_domain_matches_direct() {
        let g = CosLog { c: 0.1 };
        for x in [0.5f64, 1.0, 10.0, 1e8] {
            let l = (std::f64::consts::E + x).ln();
            let direct = (std::f64::consts::E + x).powf(0.1 * l.ln().cos().exp());
            assert!((g.ln_g_exp(x.ln()).exp() - direct).abs() < 1e-12 * direct);
            let z = g.g_complex(c(x, 0.0)).unwrap();
            assert!((z.re - direct).abs() < 1e-12 * direct && z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn staircase_jump_ratio() {
        let st = Staircase::new();
        let knots = st.finite_knots();
        for (k, want) in knots.iter().zip([2.0, 6.0, 21.0, 88.0]) {
            assert!((k - want).abs() < 1e-12 * want);
        }
        for (i, x) in knots.iter().enumerate().take(60) {
            let n = (i + 1) as f64;
            let ratio = st.g(2.0 * x) / st.g(*x);
            assert!(ratio >= n * (1.0 - 1e-12), "n = {n}: {ratio}");
        }
    }

    #[test]
    fn staircase_values_on_small_range() {
        let st = Staircase::new();
        assert!((st.g(1.5) - 1.0).abs() < 1e-14);
        assert!((st.g(2.5) - 2.0).abs() < 1e-13);
        assert!((st.g(4.0) - 3.0).abs() < 1e-13);
        assert!((st.g(6.5) - 5.0).abs() < 1e-13);
        assert!((st.g(10.0) - 7.0).abs() < 1e-13);
    }

    #[test]
    fn staircase_nondecreasing() {
        let st = Staircase::new();
        let mut prev = 0.0;
        for k in 0..4000 {
            let s = k as f64 * 0.01;
            let v = st.ln_g_exp(s);
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }
}
