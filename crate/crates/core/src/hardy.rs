//! Hardy space norms and the conformal oscillation of a function about a
//! point of the disk.
//!
//! Maps that extend continuously to the circle, or that are singular only
//! at finitely many listed boundary points, are integrated directly on the
//! circle (the radial limits exist everywhere else). Other maps go through
//! the radius schedule `r_k = 1 - 2^-k` until the values stall.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::{AnalyticMap, Boundary};
use crate::cplx::c;
use crate::error::{Error, Result};
use crate::quad::{arc_breakpoints, circle_mean, integrate, Focus, QuadResult, Tolerance};

/// Limit-taking and quadrature policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadConfig {
    /// Angular resolution; the adaptive rule starts from `nodes / 64` panels.
    pub nodes: usize,
    /// Last radius of the schedule is `1 - 2^-max_k`.
    pub max_k: u32,
    /// Relative tolerance on increments between radii.
    pub tol: f64,
    /// Consecutive small increments needed to declare convergence.
    pub stall: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { nodes: 1024, max_k: 30, tol: 1e-6, stall: 3 }
    }
}

impl QuadConfig {
    pub fn new(nodes: usize, max_k: u32, tol: f64, stall: u32) -> Result<Self> {
        let cfg = Self { nodes, max_k, tol, stall };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 16 || !self.nodes.is_power_of_two() {
            return Err(Error::InvalidSymbol(format!("node count {} must be a power of two >= 16", self.nodes)));
        }
        if self.max_k < 8 {
            return Err(Error::InvalidSymbol(format!("max_k {} must be at least 8", self.max_k)));
        }
        if !(self.tol > 0.0 && self.tol <= 1e-2) {
            return Err(Error::InvalidSymbol(format!("tolerance {} must lie in (0, 1e-2]", self.tol)));
        }
        if self.stall == 0 {
            return Err(Error::InvalidSymbol("stall window must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn baseline(&self) -> usize {
        (self.nodes / 64).max(16)
    }

    pub(crate) fn angular(&self) -> Tolerance {
        Tolerance::new(1e-16, 1e-9).with_max_panels(2000)
    }
}

/// Exponents exposed publicly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Exponent {
    One,
    Two,
}

impl Exponent {
    pub fn value(self) -> f64 {
        match self {
            Exponent::One => 1.0,
            Exponent::Two => 2.0,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "1.0" => Ok(Exponent::One),
            "2" | "2.0" => Ok(Exponent::Two),
            other => Err(Error::InvalidSymbol(format!("exponent must be 1 or 2, got {other}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormStatus {
    Converged,
    MonotoneDiverging,
    MaxIterations,
}

impl fmt::Display for NormStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormStatus::Converged => "converged",
            NormStatus::MonotoneDiverging => "monotone-diverging",
            NormStatus::MaxIterations => "max-iterations",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub status: NormStatus,
    /// Change over the last radius step, or the quadrature error estimate
    /// when the value was computed on the circle itself.
    pub last_increment: f64,
    pub radii_used: u32,
}

impl NormEstimate {
    fn zero() -> Self {
        Self { value: 0.0, status: NormStatus::Converged, last_increment: 0.0, radii_used: 0 }
    }

    pub fn is_converged(&self) -> bool {
        self.status == NormStatus::Converged
    }
}

/// `P_a(w) = (1 - |a|^2) / |1 - conj(a) w|^2` for `|w| = 1`.
pub fn poisson_kernel(a: Complex64, w: Complex64) -> Result<f64> {
    if !(a.norm() < 1.0) {
        return Err(Error::Domain { z: a, node: "poisson kernel" });
    }
    let r = w.norm();
    if !((r - 1.0).abs() <= 1e-12) {
        return Err(Error::Domain { z: w, node: "poisson kernel" });
    }
    Ok(kernel(a, w / r))
}

#[inline]
fn kernel(a: Complex64, w: Complex64) -> f64 {
    (1.0 - a.norm()) * (1.0 + a.norm()) / (1.0 - a.conj() * w).norm_sqr()
}

/// Foci for the circle of radius `r`.
pub(crate) fn foci_at_radius(foci: &[Focus], r: f64) -> Vec<Focus> {
    foci.iter().map(|f| Focus::new(f.angle, (1.0 + f.width) / r - 1.0)).collect()
}

fn p_power(z: f64, p: f64) -> f64 {
    if p == 2.0 {
        z * z
    } else if p == 1.0 {
        z
    } else {
        z.powf(p)
    }
}

fn root(mean: f64, p: f64) -> f64 {
    if p == 1.0 {
        mean
    } else if p == 2.0 {
        mean.max(0.0).sqrt()
    } else {
        mean.max(0.0).powf(1.0 / p)
    }
}

/// `(mean over the circle of radius r of |g - shift|^p)` with Poisson
/// weight `a` when given.
fn circle_p_mean(
    g: &AnalyticMap,
    shift: Complex64,
    poisson: Option<Complex64>,
    foci: &[Focus],
    r: f64,
    p: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult<f64>> {
    let foci = if r < 1.0 { foci_at_radius(foci, r) } else { foci.to_vec() };
    circle_mean(
        |t: f64| {
            let w = Complex64::from_polar(1.0, t);
            let mut v = g.eval_raw(w * r) - shift;
            if !(v.re.is_finite() && v.im.is_finite()) && r == 1.0 {
                // a node rounded onto a boundary singularity
                v = g.eval_raw(w * (1.0 - 1e-12)) - shift;
            }
            let k = poisson.map_or(1.0, |a| kernel(a, w));
            let out = p_power(v.norm(), p) * k;
            if out.is_finite() {
                Ok(out)
            } else {
                Err(Error::NonFinite(format!("{g} at {}", w * r)))
            }
        },
        &foci,
        cfg.baseline(),
        cfg.angular(),
    )
}

fn on_circle(q: QuadResult<f64>, p: f64) -> NormEstimate {
    let value = root(q.value, p);
    // d(m^(1/p)) = m^(1/p - 1) dm / p
    let err = if q.value > 0.0 { value / (p * q.value) * q.error } else { q.error };
    NormEstimate {
        value,
        status: if q.converged { NormStatus::Converged } else { NormStatus::MaxIterations },
        last_increment: err,
        radii_used: 1,
    }
}

/// Takes `lim_{r -> 1} at(r)` along `r_k = 1 - 2^-k`.
fn radial_limit<F>(mut at: F, cfg: &QuadConfig, monotone: bool) -> Result<NormEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut prev: Option<f64> = None;
    let mut quiet = 0;
    let mut incs: Vec<f64> = Vec::new();
    let mut value = 0.0;
    for k in 1..=cfg.max_k {
        let r = 1.0 - (-(k as f64)).exp2();
        value = at(r)?;
        if let Some(pv) = prev {
            if monotone && value < pv - 1e-9 * pv.max(value) {
                return Err(Error::QuadratureFault(format!("norm decreased from {pv} to {value} at r = {r}")));
            }
            let inc = value - pv;
            incs.push(inc);
            if inc.abs() <= cfg.tol * value.abs() {
                quiet += 1;
                if quiet >= cfg.stall {
                    return Ok(NormEstimate { value, status: NormStatus::Converged, last_increment: inc, radii_used: k });
                }
            } else {
                quiet = 0;
            }
        }
        prev = Some(value);
    }
    let tail = &incs[incs.len().saturating_sub(cfg.stall as usize)..];
    let growing = !tail.is_empty() && tail.iter().all(|d| *d > 0.0) && tail.windows(2).all(|w| w[1] >= 0.5 * w[0]);
    Ok(NormEstimate {
        value,
        status: if growing { NormStatus::MonotoneDiverging } else { NormStatus::MaxIterations },
        last_increment: incs.last().copied().unwrap_or(0.0),
        radii_used: cfg.max_k,
    })
}

/// `||g - shift||_{H^p}`, optionally against `P_a dm`.
fn hp_distance(
    g: &AnalyticMap,
    shift: Complex64,
    poisson: Option<Complex64>,
    p: f64,
    cfg: &QuadConfig,
) -> Result<NormEstimate> {
    let mut foci = g.foci();
    if let Some(a) = poisson {
        if a.norm() > 0.0 {
            foci.push(Focus::new(a.arg(), 1.0 / a.norm() - 1.0));
        }
    }
    match g.boundary() {
        Boundary::Continuous | Boundary::Singular(_) => Ok(on_circle(circle_p_mean(g, shift, poisson, &foci, 1.0, p, cfg)?, p)),
        Boundary::Unknown => radial_limit(
            |r| Ok(root(circle_p_mean(g, shift, poisson, &foci, r, p, cfg)?.value, p)),
            cfg,
            poisson.is_none(),
        ),
    }
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSymbol(format!("exponent {p} must be at least 1")))
    }
}

/// `||f||_{H^p}`.
pub fn hp_norm(f: &AnalyticMap, p: Exponent, cfg: &QuadConfig) -> Result<NormEstimate> {
    hp_norm_p(f, p.value(), cfg)
}

/// `||f||_{H^p}` for any real `p >= 1`.
pub fn hp_norm_p(f: &AnalyticMap, p: f64, cfg: &QuadConfig) -> Result<NormEstimate> {
    check_p(p)?;
    cfg.validate()?;
    f.validate()?;
    hp_distance(f, c(0.0, 0.0), None, p, cfg)
}

fn check_point(a: Complex64) -> Result<()> {
    if a.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { z: a, node: "disk point" })
    }
}

/// `gamma(f, a, p) = ||f o sigma_a - f(a)||_{H^p}`, computed on the
/// composition and cross-checked against the Poisson-weighted integral of
/// `|f - f(a)|^p`. Fails if the two routes differ by more than 1%.
pub fn gamma_boundary(f: &AnalyticMap, a: Complex64, p: Exponent, cfg: &QuadConfig) -> Result<NormEstimate> {
    let comp = gamma_boundary_unchecked(f, a, p.value(), cfg)?;
    if f.boundary() == Boundary::Unknown {
        return Ok(comp);
    }
    let pois = gamma_poisson(f, a, p, cfg)?;
    let scale = comp.value.max(pois.value);
    if (comp.value - pois.value).abs() > 0.01 * scale + 1e-12 {
        return Err(Error::QuadratureFault(format!(
            "oscillation of {f} at {a}: composition route {} vs Poisson route {}",
            comp.value, pois.value
        )));
    }
    Ok(comp)
}

/// The composition route alone.
pub fn gamma_boundary_unchecked(f: &AnalyticMap, a: Complex64, p: f64, cfg: &QuadConfig) -> Result<NormEstimate> {
    check_p(p)?;
    check_point(a)?;
    f.validate()?;
    if f.is_constant() {
        return Ok(NormEstimate::zero());
    }
    let fa = f.eval(a)?;
    let g = AnalyticMap::compose(f.clone(), AnalyticMap::mobius(a)?);
    hp_distance(&g, fa, None, p, cfg)
}

/// `(int |f - f(a)|^p P_a dm)^(1/p)` on the circle.
pub fn gamma_poisson(f: &AnalyticMap, a: Complex64, p: Exponent, cfg: &QuadConfig) -> Result<NormEstimate> {
    check_point(a)?;
    f.validate()?;
    if f.boundary() == Boundary::Unknown {
        return Err(Error::Domain { z: a, node: "boundary values unavailable" });
    }
    let fa = f.eval(a)?;
    hp_distance(f, fa, Some(a), p.value(), cfg)
}

/// `gamma(f, a, 2)^2` from the Littlewood-Paley identity
/// `||F - F(0)||^2 = (1/pi) int |F'(w)|^2 ln(1/|w|^2) dA(w)` with
/// `F = f o sigma_a`. Returns the squared quantity.
pub fn gamma_area_p2(f: &AnalyticMap, a: Complex64, cfg: &QuadConfig) -> Result<NormEstimate> {
    check_point(a)?;
    f.validate()?;
    if f.is_constant() {
        return Ok(NormEstimate::zero());
    }
    let g = AnalyticMap::compose(f.clone(), AnalyticMap::mobius(a)?);
    let foci = g.foci();
    let narrowest = foci.iter().map(|f| f.width).fold(1.0f64, f64::min);
    let mut breaks = vec![0.0];
    let mut k = 1;
    while k <= 46 && (k <= 4 || (-(k as f64)).exp2() > narrowest / 16.0) {
        breaks.push(1.0 - (-(k as f64)).exp2());
        k += 1;
    }
    breaks.push(1.0);
    let angular = cfg.angular().with_max_panels(4000);
    let outer = integrate(
        |r: f64| {
            if r == 0.0 {
                return Ok(0.0);
            }
            let fr = foci_at_radius(&foci, r);
            let m2 = circle_mean(
                |t: f64| {
                    let (_, d) = g.eval_deriv_raw(Complex64::from_polar(r, t));
                    let v = d.norm_sqr();
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::NonFinite(format!("derivative of {g} at radius {r}")))
                    }
                },
                &fr,
                cfg.baseline(),
                angular,
            )?;
            // 2 r ln(1/r^2) = -4 r ln r
            Ok(-4.0 * r * r.ln() * m2.value)
        },
        &breaks,
        Tolerance::new(1e-16, 1e-9),
    )?;
    Ok(NormEstimate {
        value: outer.value,
        status: if outer.converged { NormStatus::Converged } else { NormStatus::MaxIterations },
        last_increment: outer.error,
        radii_used: outer.panels as u32,
    })
}

/// A boundary arc given by its center angle and normalized length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcSpec {
    pub center: f64,
    /// `m(I)` in `(0, 1]`.
    pub length: f64,
}

impl ArcSpec {
    pub fn new(center: f64, length: f64) -> Result<Self> {
        if !(length > 0.0 && length <= 1.0 && center.is_finite()) {
            return Err(Error::InvalidSymbol(format!("arc length {length} must lie in (0, 1]")));
        }
        Ok(Self { center, length })
    }

    fn bounds(&self) -> (f64, f64) {
        (self.center - PI * self.length, self.center + PI * self.length)
    }
}

/// `eta(f, I, p)`: the `L^p(I, dm / m(I))` distance of the boundary
/// function from its mean over `I`.
pub fn arc_eta(f: &AnalyticMap, arc: ArcSpec, p: Exponent, cfg: &QuadConfig) -> Result<NormEstimate> {
    arc_eta_p(f, arc, p.value(), cfg)
}

pub fn arc_eta_p(f: &AnalyticMap, arc: ArcSpec, p: f64, cfg: &QuadConfig) -> Result<NormEstimate> {
    check_p(p)?;
    cfg.validate()?;
    f.validate()?;
    if f.is_constant() {
        return Ok(NormEstimate::zero());
    }
    let foci = f.foci();
    let eta_at = |r: f64| -> Result<QuadResult<f64>> {
        let fr = if r < 1.0 { foci_at_radius(&foci, r) } else { foci.clone() };
        let (lo, hi) = arc.bounds();
        let breaks = arc_breakpoints(&fr, lo, hi, cfg.baseline());
        let span = breaks[breaks.len() - 1] - breaks[0];
        let tol = cfg.angular();
        let eval = |t: f64| -> Result<Complex64> {
            let v = f.eval_raw(Complex64::from_polar(r, t));
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFinite(format!("{f} at angle {t}")))
            }
        };
        let mean = integrate(eval, &breaks, tol)?.value / span;
        let mut q = integrate(|t: f64| Ok(p_power((eval(t)? - mean).norm(), p)), &breaks, tol)?;
        q.value /= span;
        q.error /= span;
        Ok(q)
    };
    match f.boundary() {
        Boundary::Continuous | Boundary::Singular(_) => Ok(on_circle(eta_at(1.0)?, p)),
        Boundary::Unknown => radial_limit(|r| Ok(root(eta_at(r)?.value, p)), cfg, false),
    }
}

#[cfg(test)]
mod tests;
