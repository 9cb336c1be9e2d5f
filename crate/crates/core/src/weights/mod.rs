//! Radial weights `v(z) = g(1/(1-|z|))` and their admissibility diagnostics.
//!
//! Generators are evaluated in logarithmic coordinates, `G(s) = ln g(e^s)`,
//! which keeps the far tail (where the admissibility conditions live)
//! representable long after `g` itself would overflow.

mod admissibility;
mod fixtures;
mod parse;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cplx::{c, exp_m1, ln_1p, powf};
use crate::error::{Error, Result};
use crate::quad::{integrate, Tolerance};

pub use admissibility::{
    check_a1, check_a2, check_a3, check_admissibility, check_almost_increasing, mobius_ratio_sup,
    AdmissibilityReport, Condition, ConditionRecord, MobiusRatio, Trend, Verdict,
};
pub use fixtures::{CosLog, Derived, Staircase};
pub use parse::parse_weight;

/// A user-supplied weight generator `g : [1/2, oo) -> (0, oo)`.
pub trait Generator: Send + Sync + fmt::Debug {
    /// Canonical description, as accepted by the weight grammar.
    fn describe(&self) -> String;

    /// `ln g(e^s)`, for `s >= -ln 2`.
    fn ln_g_exp(&self, s: f64) -> f64;

    /// `g(x)` for `x >= 1/2`.
    fn g(&self, x: f64) -> f64 {
        self.ln_g_exp(x.ln()).exp()
    }

    /// Analytic continuation to `Re z >= 1/2`, if the generator has one.
    fn g_complex(&self, _z: Complex64) -> Option<Complex64> {
        None
    }

    /// `int_0^s exp(-G(t)) dt` in closed form, if known.
    fn real_primitive(&self, _s: f64) -> Option<f64> {
        None
    }

    fn default_eps0(&self) -> Option<f64> {
        None
    }
}

/// Bounded positive factor `u(x)`, piecewise linear in `log2 x` through
/// `samples[k]` at `x = 2^k` and constant outside the sampled range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedFactor {
    samples: Vec<f64>,
}

impl BoundedFactor {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() || samples.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidWeight("bounded factor needs positive finite samples".into()));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    fn value_at_log(&self, s: f64) -> f64 {
        let t = s / std::f64::consts::LN_2;
        let n = self.samples.len();
        if t <= 0.0 || n == 1 {
            return self.samples[0];
        }
        if t >= (n - 1) as f64 {
            return self.samples[n - 1];
        }
        let k = t.floor() as usize;
        let f = t - k as f64;
        self.samples[k] * (1.0 - f) + self.samples[k + 1] * f
    }
}

#[derive(Debug, Clone)]
pub enum WeightKind {
    /// `g(x) = x^c`
    Power(f64),
    /// `g(x) = (ln(e x))^c`
    Log(f64),
    Constant,
    /// Product of a weight with a bounded positive factor.
    Product(Box<WeightSpec>, BoundedFactor),
    Custom(Arc<dyn Generator>),
}

/// A radial weight together with its admissibility exponent `eps0`.
#[derive(Debug, Clone)]
pub struct WeightSpec {
    kind: WeightKind,
    eps0: f64,
}

fn check_exponent(c: f64, strict: bool) -> Result<()> {
    let ok = c.is_finite() && if strict { c > 0.0 } else { c >= 0.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidWeight(format!("exponent {c} out of range")))
    }
}

impl WeightSpec {
    pub fn power(c: f64) -> Result<Self> {
        check_exponent(c, false)?;
        let eps0 = if c > 0.0 && c < 0.5 { 1.0 / c - 2.0 } else { 1.0 };
        Ok(Self { kind: WeightKind::Power(c), eps0 })
    }

    pub fn log(c: f64) -> Result<Self> {
        check_exponent(c, true)?;
        Ok(Self { kind: WeightKind::Log(c), eps0: 1.0 })
    }

    pub fn constant() -> Self {
        Self { kind: WeightKind::Constant, eps0: 1.0 }
    }

    pub fn product(base: WeightSpec, factor: BoundedFactor) -> Self {
        let eps0 = base.eps0;
        Self { kind: WeightKind::Product(Box::new(base), factor), eps0 }
    }

    /// Wraps a custom generator. `eps0` falls back to the generator's default.
    pub fn custom(generator: Arc<dyn Generator>, eps0: Option<f64>) -> Result<Self> {
        let eps0 = eps0
            .or_else(|| generator.default_eps0())
            .ok_or_else(|| Error::InvalidWeight(format!("{} needs an explicit eps0", generator.describe())))?;
        Self { kind: WeightKind::Custom(generator), eps0 }.with_eps0(eps0)
    }

    pub fn with_eps0(mut self, eps0: f64) -> Result<Self> {
        if !(eps0.is_finite() && eps0 > 0.0) {
            return Err(Error::InvalidWeight(format!("eps0 must be positive, got {eps0}")));
        }
        self.eps0 = eps0;
        Ok(self)
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    /// `G(s) = ln g(e^s)`.
    pub fn ln_g_exp(&self, s: f64) -> f64 {
        match &self.kind {
            WeightKind::Power(p) => p * s,
            WeightKind::Log(p) => p * s.ln_1p(),
            WeightKind::Constant => 0.0,
            WeightKind::Product(base, u) => base.ln_g_exp(s) + u.value_at_log(s).ln(),
            WeightKind::Custom(g) => g.ln_g_exp(s),
        }
    }

    /// Generator value `g(x)`, `x >= 1/2`.
    pub fn g(&self, x: f64) -> f64 {
        match &self.kind {
            WeightKind::Power(p) => x.powf(*p),
            WeightKind::Log(p) => (1.0 + x.ln()).powf(*p),
            WeightKind::Constant => 1.0,
            WeightKind::Product(base, u) => base.g(x) * u.value_at_log(x.ln()),
            WeightKind::Custom(g) => g.g(x),
        }
    }

    /// Analytic continuation of `g` to `Re z >= 1/2` (principal branches).
    pub fn g_complex(&self, z: Complex64) -> Option<Complex64> {
        match &self.kind {
            WeightKind::Power(p) => Some(powf(z, *p)),
            WeightKind::Log(p) => Some(powf(c(1.0, 0.0) + z.ln(), *p)),
            WeightKind::Constant => Some(c(1.0, 0.0)),
            WeightKind::Product(..) => None,
            WeightKind::Custom(g) => g.g_complex(z),
        }
    }

    pub fn has_halfplane_extension(&self) -> bool {
        self.g_complex(c(2.0, 1.0)).is_some()
    }

    /// The weight itself, `v(z) = g(1/(1-|z|))`.
    pub fn v(&self, z: Complex64) -> Result<f64> {
        self.v_radial(z.norm())
    }

    pub fn v_radial(&self, r: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::Domain { z: c(r, 0.0), node: "weight" });
        }
        Ok(self.ln_g_exp(-(-r).ln_1p()).exp())
    }

    /// `int_0^s exp(-G(t)) dt`, closed form when available.
    pub fn real_primitive(&self, s: f64) -> Result<f64> {
        let closed = match &self.kind {
            WeightKind::Power(p) if *p > 0.0 => Some(-(-p * s).exp_m1() / p),
            WeightKind::Power(_) | WeightKind::Constant => Some(s),
            WeightKind::Log(p) if (*p - 1.0).abs() < 1e-15 => Some(s.ln_1p()),
            WeightKind::Log(p) => Some((((1.0 - p) * s.ln_1p()).exp_m1()) / (1.0 - p)),
            WeightKind::Product(..) => None,
            WeightKind::Custom(g) => g.real_primitive(s),
        };
        match closed {
            Some(v) => Ok(v),
            None => self.primitive_by_quadrature(0.0, s),
        }
    }

    fn primitive_by_quadrature(&self, from: f64, to: f64) -> Result<f64> {
        if to == from {
            return Ok(0.0);
        }
        let mut breaks = vec![from];
        let mut x = from.max(0.0) + 1.0;
        while x < to {
            if x > from {
                breaks.push(x);
            }
            x *= 2.0;
        }
        breaks.push(to);
        let r = integrate(|t: f64| Ok((-self.ln_g_exp(t)).exp()), &breaks, Tolerance::new(1e-13, 1e-13))?;
        if !r.converged {
            return Err(Error::QuadratureFault(format!("primitive of {self} on [{from}, {to}]")));
        }
        Ok(r.value)
    }

    /// `h(x) = int_0^x dt / ((1-t) g(1/(1-t)))`, computed by adaptive
    /// quadrature after the substitution `t = 1 - e^{-s}`.
    pub fn h_fn(&self, x: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::Domain { z: c(x, 0.0), node: "h" });
        }
        self.primitive_by_quadrature(0.0, -(-x).ln_1p())
    }

    /// Norm of point evaluation at `z` on the weighted space: `1 + h(|z|)`.
    pub fn eval_norm(&self, z: Complex64) -> Result<f64> {
        Ok(1.0 + self.h_fn(z.norm())?)
    }

    /// Decides whether `h` stays bounded as `x -> 1`, i.e. whether the
    /// weighted space embeds into bounded functions.
    pub fn hinf_embedding(&self) -> Result<HinfEmbedding> {
        let mut total = self.primitive_by_quadrature(0.0, 1.0)?;
        let mut increments = Vec::with_capacity(40);
        for k in 1..=40 {
            let lo = f64::powi(2.0, k - 1);
            let d = self.primitive_by_quadrature(lo, 2.0 * lo)?;
            increments.push(d);
            total += d;
        }
        let n = increments.len();
        let tail = &increments[n - 6..];
        let ratios: Vec<f64> = tail.windows(2).map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 }).collect();
        let negligible = tail[5] <= 1e-15 * total;
        let geometric = ratios.iter().all(|r| *r <= 0.9);
        let stalled = ratios.iter().all(|r| *r >= 0.99);
        let (status, limit) = if negligible {
            (Trend::Bounded, Some(1.0 + total))
        } else if geometric {
            let rho = ratios[ratios.len() - 1];
            (Trend::Bounded, Some(1.0 + total + tail[5] * rho / (1.0 - rho)))
        } else if stalled {
            (Trend::Diverging, None)
        } else {
            (Trend::Inconclusive, None)
        };
        Ok(HinfEmbedding { status, limit, increments })
    }

    /// Closed-form `int_0^w dt / ((1-t) g(1/(1-t)))` for the built-in kinds.
    pub(crate) fn complex_primitive(&self, w: Complex64) -> Option<Complex64> {
        let l = ln_1p(-w); // log(1 - w)
        match &self.kind {
            WeightKind::Constant => Some(-l),
            WeightKind::Power(p) if *p == 0.0 => Some(-l),
            WeightKind::Power(p) => {
                if w == c(1.0, 0.0) {
                    return Some(c(1.0 / p, 0.0));
                }
                Some(-exp_m1(l * *p) / *p)
            }
            WeightKind::Log(p) => {
                let u = c(1.0, 0.0) - l;
                if (*p - 1.0).abs() < 1e-15 {
                    Some(ln_1p(-l))
                } else {
                    Some(exp_m1(u.ln() * (1.0 - p)) / (1.0 - p))
                }
            }
            _ => None,
        }
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WeightKind::Power(p) => write!(f, "power {p}"),
            WeightKind::Log(p) => write!(f, "log {p}"),
            WeightKind::Constant => write!(f, "const"),
            WeightKind::Product(base, u) => {
                let list: Vec<String> = u.samples.iter().map(|s| s.to_string()).collect();
                write!(f, "product ({base}) bounded-factor=[{}]", list.join(", "))
            }
            WeightKind::Custom(g) => write!(f, "{}", g.describe()),
        }
    }
}

/// Outcome of the bounded-embedding test for `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HinfEmbedding {
    pub status: Trend,
    /// Limit of the evaluation norm `1 + h(x)` as `x -> 1`, when bounded.
    pub limit: Option<f64>,
    /// Increments of `h` over the dyadic blocks `s in [2^(k-1), 2^k]`.
    pub increments: Vec<f64>,
}
