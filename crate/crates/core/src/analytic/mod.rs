//! Analytic maps on the unit disk as immutable expression trees.
//!
//! Trees are reference counted, so sub-expressions can be shared freely and
//! sent across threads. Besides values and derivatives, every node reports
//! how it behaves on the unit circle: where it is singular, and near which
//! boundary points it varies on a short scale. Quadrature on circles uses
//! these hints to place its panels.

mod parse;

use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::cplx::c;
use crate::error::{Error, Result};
use crate::grammar::format_complex;
use crate::quad::{integrate, Focus, Tolerance};
use crate::weights::WeightSpec;

pub use parse::{parse_symbol, parse_symbol_with};

/// Slack allowed on `|z| <= 1` for boundary evaluation.
pub const BOUNDARY_SLACK: f64 = 1e-9;

const SELF_MAP_SAMPLES: usize = 1024;

/// The Möbius involution `sigma_a(z) = (a - z) / (1 - conj(a) z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    a: Complex64,
}

impl Mobius {
    pub fn new(a: Complex64) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(Error::InvalidSymbol(format!("Möbius parameter {a} must lie in the open disk")));
        }
        Ok(Self { a })
    }

    pub fn point(&self) -> Complex64 {
        self.a
    }

    #[inline]
    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a - z) / (1.0 - self.a.conj() * z)
    }

    #[inline]
    pub fn apply_with_deriv(&self, z: Complex64) -> (Complex64, Complex64) {
        let den = 1.0 - self.a.conj() * z;
        let val = (self.a - z) / den;
        let one_minus = (1.0 - self.a.norm()) * (1.0 + self.a.norm());
        (val, -one_minus / (den * den))
    }

    fn focus(&self) -> Option<Focus> {
        let r = self.a.norm();
        (r > 0.0).then(|| Focus::new(self.a.arg(), 1.0 / r - 1.0))
    }
}

/// How a map behaves on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub enum Boundary {
    /// Extends continuously to the closed disk.
    Continuous,
    /// Evaluable on the circle except at the listed points, with boundary
    /// values in every `L^p`, `p < oo`.
    Singular(Vec<Complex64>),
    /// No usable boundary description.
    Unknown,
}

impl Boundary {
    fn join(self, other: Boundary) -> Boundary {
        match (self, other) {
            (Boundary::Unknown, _) | (_, Boundary::Unknown) => Boundary::Unknown,
            (Boundary::Continuous, b) | (b, Boundary::Continuous) => b,
            (Boundary::Singular(mut a), Boundary::Singular(b)) => {
                a.extend(b);
                Boundary::Singular(a)
            }
        }
    }
}

#[derive(Debug)]
enum Node {
    Const(Complex64),
    Identity,
    Polynomial(Vec<Complex64>),
    Mobius(Mobius),
    Blaschke { zeros: Vec<(Mobius, Complex64)>, m: u32 },
    Dilation { c: Complex64, inner: AnalyticMap },
    HPrimitive { weight: WeightSpec, c: Complex64 },
    Sum(Vec<AnalyticMap>),
    Product(Vec<AnalyticMap>),
    IntPower(AnalyticMap, u32),
    Compose { outer: AnalyticMap, inner: AnalyticMap, self_map: OnceLock<Result<()>> },
}

/// An analytic function on the unit disk.
#[derive(Debug, Clone)]
pub struct AnalyticMap(Arc<Node>);

impl AnalyticMap {
    fn wrap(node: Node) -> Self {
        Self(Arc::new(node))
    }

    pub fn constant(value: Complex64) -> Self {
        Self::wrap(Node::Const(value))
    }

    pub fn identity() -> Self {
        Self::wrap(Node::Identity)
    }

    /// `sum_k coeffs[k] z^k`.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSymbol("polynomial needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidSymbol("polynomial coefficients must be finite".into()));
        }
        Ok(Self::wrap(Node::Polynomial(coeffs)))
    }

    pub fn mobius(a: Complex64) -> Result<Self> {
        Ok(Self::wrap(Node::Mobius(Mobius::new(a)?)))
    }

    /// `z^m prod_k (|b_k| / b_k) sigma_{b_k}(z)` for nonzero `b_k` in the disk.
    pub fn blaschke(zeros: Vec<Complex64>, m: u32) -> Result<Self> {
        let zeros = zeros
            .into_iter()
            .map(|b| {
                if b.norm() == 0.0 {
                    return Err(Error::InvalidSymbol("Blaschke zeros at the origin go into m".into()));
                }
                Ok((Mobius::new(b)?, b.conj() / b.norm()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::wrap(Node::Blaschke { zeros, m }))
    }

    /// `z -> f(c z)` for `|c| <= 1`.
    pub fn dilate(f: AnalyticMap, c: Complex64) -> Result<Self> {
        if !(c.norm() <= 1.0) {
            return Err(Error::InvalidSymbol(format!("dilation factor {c} must satisfy |c| <= 1")));
        }
        Ok(Self::wrap(Node::Dilation { c, inner: f }))
    }

    /// `z -> h(c z)` where `h(w) = int_0^w dt / ((1-t) g(1/(1-t)))`.
    pub fn hprimitive(weight: WeightSpec, c: Complex64) -> Result<Self> {
        if !(c.norm() <= 1.0) {
            return Err(Error::InvalidSymbol(format!("h-primitive scalar {c} must satisfy |c| <= 1")));
        }
        if !weight.has_halfplane_extension() {
            return Err(Error::InvalidSymbol(format!("weight {weight} has no analytic extension")));
        }
        Ok(Self::wrap(Node::HPrimitive { weight, c }))
    }

    pub fn sum(terms: Vec<AnalyticMap>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidSymbol("empty sum".into()));
        }
        Ok(Self::wrap(Node::Sum(terms)))
    }

    pub fn product(factors: Vec<AnalyticMap>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSymbol("empty product".into()));
        }
        Ok(Self::wrap(Node::Product(factors)))
    }

    pub fn pow(base: AnalyticMap, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSymbol("integer power must be at least 1".into()));
        }
        Ok(Self::wrap(Node::IntPower(base, n)))
    }

    /// `outer o inner`; `inner` must map the disk into itself, which is
    /// checked numerically on first evaluation.
    pub fn compose(outer: AnalyticMap, inner: AnalyticMap) -> Self {
        Self::wrap(Node::Compose { outer, inner, self_map: OnceLock::new() })
    }

    /// `(1 + z) / 2`.
    pub fn halfmap() -> Self {
        Self::wrap(Node::Polynomial(vec![c(0.5, 0.0), c(0.5, 0.0)]))
    }

    pub fn add(&self, other: &AnalyticMap) -> Self {
        Self::wrap(Node::Sum(vec![self.clone(), other.clone()]))
    }

    pub fn sub(&self, other: &AnalyticMap) -> Self {
        self.add(&other.scale(c(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &AnalyticMap) -> Self {
        Self::wrap(Node::Product(vec![self.clone(), other.clone()]))
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::wrap(Node::Product(vec![Self::constant(k), self.clone()]))
    }

    pub fn shift(&self, k: Complex64) -> Self {
        Self::wrap(Node::Sum(vec![self.clone(), Self::constant(k)]))
    }

    /// The Möbius parameter if this node is a bare Möbius map.
    pub fn as_mobius(&self) -> Option<Mobius> {
        match &*self.0 {
            Node::Mobius(m) => Some(*m),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        match &*self.0 {
            Node::Const(_) => true,
            Node::Polynomial(cs) => cs.iter().skip(1).all(|z| *z == c(0.0, 0.0)),
            Node::Sum(ts) => ts.iter().all(|t| t.is_constant()),
            Node::Product(fs) => fs.iter().all(|f| f.is_constant()),
            Node::IntPower(b, _) => b.is_constant(),
            Node::Dilation { c: k, inner } => *k == c(0.0, 0.0) || inner.is_constant(),
            Node::HPrimitive { c: k, .. } => *k == c(0.0, 0.0),
            Node::Compose { outer, .. } => outer.is_constant(),
            _ => false,
        }
    }

    /// Checks every composition in the tree for the self-map property.
    pub fn validate(&self) -> Result<()> {
        match &*self.0 {
            Node::Dilation { inner, .. } | Node::IntPower(inner, _) => inner.validate(),
            Node::Sum(ts) | Node::Product(ts) => ts.iter().try_for_each(|t| t.validate()),
            Node::Compose { outer, inner, self_map } => {
                outer.validate()?;
                inner.validate()?;
                self_map.get_or_init(|| inner.check_self_map()).clone()
            }
            _ => Ok(()),
        }
    }

    /// Maximum modulus over `SELF_MAP_SAMPLES` points of the circle (or of
    /// the circle of radius `1 - 1e-6` when boundary values are unavailable).
    pub fn boundary_sup(&self) -> Result<f64> {
        self.validate()?;
        let r = if self.boundary() == Boundary::Continuous { 1.0 } else { 1.0 - 1e-6 };
        let mut sup = 0.0f64;
        for k in 0..SELF_MAP_SAMPLES {
            let z = Complex64::from_polar(r, TAU * (k as f64 + 0.5) / SELF_MAP_SAMPLES as f64);
            let v = self.eval_raw(z);
            if !v.norm().is_finite() {
                return Err(Error::NonFinite(format!("{self} at {z}")));
            }
            sup = sup.max(v.norm());
        }
        Ok(sup)
    }

    /// Fails unless the sampled boundary supremum is at most `1 + 1e-9`.
    pub fn check_self_map(&self) -> Result<()> {
        let sup = self.boundary_sup()?;
        if sup <= 1.0 + BOUNDARY_SLACK {
            Ok(())
        } else {
            Err(Error::InvalidSymbol(format!("{self} is not a self-map of the disk (boundary sup {sup})")))
        }
    }

    /// Evaluates at `z`, which must lie in the open disk, or on the closed
    /// disk for maps that extend continuously to the boundary.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_domain(z)?;
        let v = self.eval_raw(z);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("{self} at {z}")))
        }
    }

    /// Value and complex derivative at an interior point.
    pub fn eval_deriv(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        self.check_domain(z)?;
        if !(z.norm() < 1.0) {
            return Err(Error::Domain { z, node: self.kind_name() });
        }
        let (v, d) = self.eval_deriv_raw(z);
        if [v.re, v.im, d.re, d.im].iter().all(|x| x.is_finite()) {
            Ok((v, d))
        } else {
            Err(Error::NonFinite(format!("{self} at {z}")))
        }
    }

    fn check_domain(&self, z: Complex64) -> Result<()> {
        self.validate()?;
        let r = z.norm();
        let ok = r < 1.0 || (r <= 1.0 + BOUNDARY_SLACK && self.boundary() == Boundary::Continuous);
        if ok {
            Ok(())
        } else {
            Err(Error::Domain { z, node: self.kind_name() })
        }
    }

    fn kind_name(&self) -> &'static str {
        match &*self.0 {
            Node::Const(_) => "const",
            Node::Identity => "identity",
            Node::Polynomial(_) => "polynomial",
            Node::Mobius(_) => "mobius",
            Node::Blaschke { .. } => "blaschke",
            Node::Dilation { .. } => "dilation",
            Node::HPrimitive { .. } => "h-primitive",
            Node::Sum(_) => "sum",
            Node::Product(_) => "product",
            Node::IntPower(..) => "power",
            Node::Compose { .. } => "compose",
        }
    }

    /// Evaluation without domain checks. Callers are responsible for
    /// validating the tree and for handling non-finite results.
    pub fn eval_raw(&self, z: Complex64) -> Complex64 {
        match &*self.0 {
            Node::Const(v) => *v,
            Node::Identity => z,
            Node::Polynomial(cs) => cs.iter().rev().fold(c(0.0, 0.0), |acc, k| acc * z + k),
            Node::Mobius(m) => m.apply(z),
            Node::Blaschke { zeros, m } => {
                let mut p = z.powu(*m);
                for (s, unit) in zeros {
                    p *= s.apply(z) * unit;
                }
                p
            }
            Node::Dilation { c: k, inner } => inner.eval_raw(k * z),
            Node::HPrimitive { weight, c: k } => hprimitive_value(weight, k * z),
            Node::Sum(ts) => ts.iter().fold(c(0.0, 0.0), |acc, t| acc + t.eval_raw(z)),
            Node::Product(fs) => fs.iter().fold(c(1.0, 0.0), |acc, f| acc * f.eval_raw(z)),
            Node::IntPower(b, n) => b.eval_raw(z).powu(*n),
            Node::Compose { outer, inner, .. } => outer.eval_raw(inner.eval_raw(z)),
        }
    }

    pub fn eval_deriv_raw(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = c(0.0, 0.0);
        match &*self.0 {
            Node::Const(v) => (*v, zero),
            Node::Identity => (z, c(1.0, 0.0)),
            Node::Polynomial(cs) => {
                let (mut p, mut d) = (zero, zero);
                for k in cs.iter().rev() {
                    d = d * z + p;
                    p = p * z + k;
                }
                (p, d)
            }
            Node::Mobius(m) => m.apply_with_deriv(z),
            Node::Blaschke { zeros, m } => {
                let (mut p, mut d) = if *m == 0 {
                    (c(1.0, 0.0), zero)
                } else {
                    (z.powu(*m), z.powu(*m - 1) * *m as f64)
                };
                for (s, unit) in zeros {
                    let (f, fd) = s.apply_with_deriv(z);
                    let (f, fd) = (f * unit, fd * unit);
                    d = d * f + p * fd;
                    p *= f;
                }
                (p, d)
            }
            Node::Dilation { c: k, inner } => {
                let (v, d) = inner.eval_deriv_raw(k * z);
                (v, d * k)
            }
            Node::HPrimitive { weight, c: k } => {
                let w = k * z;
                (hprimitive_value(weight, w), hprimitive_integrand(weight, w) * k)
            }
            Node::Sum(ts) => ts.iter().fold((zero, zero), |(v, d), t| {
                let (tv, td) = t.eval_deriv_raw(z);
                (v + tv, d + td)
            }),
            Node::Product(fs) => fs.iter().fold((c(1.0, 0.0), zero), |(v, d), f| {
                let (fv, fd) = f.eval_deriv_raw(z);
                (v * fv, d * fv + v * fd)
            }),
            Node::IntPower(b, n) => {
                let (v, d) = b.eval_deriv_raw(z);
                (v.powu(*n), v.powu(*n - 1) * d * *n as f64)
            }
            Node::Compose { outer, inner, .. } => {
                let (iv, id) = inner.eval_deriv_raw(z);
                let (ov, od) = outer.eval_deriv_raw(iv);
                (ov, od * id)
            }
        }
    }

    /// `f(r e^{2 pi i k / m})` for `k = 0..m`.
    pub fn boundary_samples(&self, r: f64, m: usize) -> Result<Vec<Complex64>> {
        if m == 0 || !(0.0..=1.0).contains(&r) {
            return Err(Error::Domain { z: c(r, 0.0), node: self.kind_name() });
        }
        (0..m)
            .map(|k| self.eval(Complex64::from_polar(r, TAU * k as f64 / m as f64)))
            .collect()
    }

    /// Taylor coefficients `c_0..=c_n` from a discrete Cauchy integral on
    /// the circle of radius `r`. Accuracy degrades like `r^-n`.
    pub fn taylor_coeffs(&self, n: usize, r: f64) -> Result<Vec<Complex64>> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Domain { z: c(r, 0.0), node: self.kind_name() });
        }
        if r.powi(n as i32) < 1e-12 {
            return Err(Error::IllConditioned(format!("r^n = {:e} for r = {r}, n = {n}", r.powi(n as i32))));
        }
        let m = (2 * (n + 1)).next_power_of_two().max(256);
        let samples = self.boundary_samples(r, m)?;
        Ok((0..=n)
            .map(|j| {
                let sum = samples.iter().enumerate().fold(c(0.0, 0.0), |acc, (k, v)| {
                    let phase = -TAU * ((j * k) % m) as f64 / m as f64;
                    acc + v * Complex64::from_polar(1.0, phase)
                });
                sum / (m as f64 * r.powi(j as i32))
            })
            .collect())
    }

    /// Boundary behaviour of the map.
    pub fn boundary(&self) -> Boundary {
        match &*self.0 {
            Node::Const(_) | Node::Identity | Node::Polynomial(_) | Node::Mobius(_) | Node::Blaschke { .. } => {
                Boundary::Continuous
            }
            Node::Dilation { c: k, inner } => {
                if k.norm() < 1.0 {
                    Boundary::Continuous
                } else {
                    match inner.boundary() {
                        Boundary::Singular(pts) => Boundary::Singular(pts.iter().map(|p| p / k).collect()),
                        other => other,
                    }
                }
            }
            Node::HPrimitive { c: k, .. } => {
                if k.norm() < 1.0 {
                    Boundary::Continuous
                } else {
                    Boundary::Singular(vec![k.inv()])
                }
            }
            Node::Sum(ts) | Node::Product(ts) => {
                ts.iter().fold(Boundary::Continuous, |acc, t| acc.join(t.boundary()))
            }
            Node::IntPower(b, _) => b.boundary(),
            Node::Compose { outer, inner, .. } => {
                let ib = inner.boundary();
                match outer.boundary() {
                    Boundary::Continuous => ib,
                    Boundary::Unknown => Boundary::Unknown,
                    Boundary::Singular(pts) => match (&*inner.0, ib) {
                        (Node::Identity, b) => b.join(Boundary::Singular(pts)),
                        (Node::Mobius(m), b) => b.join(Boundary::Singular(pts.iter().map(|p| m.apply(*p)).collect())),
                        _ => Boundary::Unknown,
                    },
                }
            }
        }
    }

    /// Boundary points near which the map varies on a short scale.
    pub fn foci(&self) -> Vec<Focus> {
        let mut out = Vec::new();
        self.collect_foci(&mut out);
        out
    }

    fn collect_foci(&self, out: &mut Vec<Focus>) {
        match &*self.0 {
            Node::Const(_) | Node::Identity | Node::Polynomial(_) => {}
            Node::Mobius(m) => out.extend(m.focus()),
            Node::Blaschke { zeros, .. } => out.extend(zeros.iter().filter_map(|(m, _)| m.focus())),
            Node::Dilation { c: k, inner } => {
                let r = k.norm();
                if r == 0.0 {
                    return;
                }
                for f in inner.foci() {
                    out.push(Focus::new(f.angle - k.arg(), (1.0 + f.width) / r - 1.0));
                }
            }
            Node::HPrimitive { c: k, .. } => {
                let r = k.norm();
                if r > 0.0 {
                    out.push(Focus::new(-k.arg(), 1.0 / r - 1.0));
                }
            }
            Node::Sum(ts) | Node::Product(ts) => ts.iter().for_each(|t| t.collect_foci(out)),
            Node::IntPower(b, _) => b.collect_foci(out),
            Node::Compose { outer, inner, .. } => {
                inner.collect_foci(out);
                let outer_foci = outer.foci();
                if outer_foci.is_empty() {
                    return;
                }
                match &*inner.0 {
                    Node::Identity => out.extend(outer_foci),
                    Node::Mobius(m) => {
                        for f in outer_foci {
                            let p = Complex64::from_polar(1.0 + f.width, f.angle);
                            let q = m.apply(p);
                            out.push(Focus::new(q.arg(), (q.norm() - 1.0).abs()));
                        }
                    }
                    _ => out.extend(preimage_foci(inner, &outer_foci)),
                }
            }
        }
    }
}

/// Locates `inner^{-1}` of each focus point by sampling and Newton steps.
fn preimage_foci(inner: &AnalyticMap, targets: &[Focus]) -> Vec<Focus> {
    const SAMPLES: usize = 256;
    let pts: Vec<(Complex64, Complex64)> = (0..SAMPLES)
        .map(|k| {
            let w = Complex64::from_polar(1.0, TAU * k as f64 / SAMPLES as f64);
            (w, inner.eval_raw(w))
        })
        .collect();
    let mut out = Vec::new();
    for f in targets {
        let target = Complex64::from_polar(1.0 + f.width, f.angle);
        let Some(&(mut w, _)) = pts
            .iter()
            .filter(|(_, v)| v.norm().is_finite())
            .min_by(|a, b| (a.1 - target).norm().total_cmp(&(b.1 - target).norm()))
        else {
            continue;
        };
        for _ in 0..30 {
            let (v, d) = inner.eval_deriv_raw(w);
            if d.norm() == 0.0 || !d.norm().is_finite() {
                break;
            }
            let step = (v - target) / d;
            let next = w - step;
            if !(next.norm().is_finite()) || (next.norm() - 1.0).abs() > 0.5 {
                break;
            }
            w = next;
            if step.norm() < 1e-15 {
                break;
            }
        }
        out.push(Focus::new(w.arg(), (w.norm() - 1.0).abs()));
    }
    out
}

fn hprimitive_value(weight: &WeightSpec, w: Complex64) -> Complex64 {
    if let Some(v) = weight.complex_primitive(w) {
        return v;
    }
    hprimitive_by_quadrature(weight, w).unwrap_or(c(f64::NAN, f64::NAN))
}

fn hprimitive_integrand(weight: &WeightSpec, w: Complex64) -> Complex64 {
    let one_minus = 1.0 - w;
    match weight.g_complex(one_minus.inv()) {
        Some(g) => (one_minus * g).inv(),
        None => c(f64::NAN, f64::NAN),
    }
}

/// `int_0^w` along the segment, panels graded towards the end point when
/// it approaches the singularity at 1.
pub(crate) fn hprimitive_by_quadrature(weight: &WeightSpec, w: Complex64) -> Result<Complex64> {
    if w == c(0.0, 0.0) {
        return Ok(w);
    }
    let gap = (1.0 - w).norm() / w.norm().max(1e-300);
    let mut breaks = vec![0.0];
    let mut d = 0.25;
    while d > 0.25 * gap && d > 1e-15 {
        breaks.push(1.0 - d);
        d *= 0.25;
    }
    breaks.push(1.0);
    let r = integrate(
        |t: f64| Ok(hprimitive_integrand(weight, w * t) * w),
        &breaks,
        Tolerance::new(1e-14, 1e-12),
    )?;
    Ok(r.value)
}

impl fmt::Display for AnalyticMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Const(v) => write!(f, "const {}", format_complex(*v)),
            Node::Identity => write!(f, "z"),
            Node::Polynomial(cs) => {
                write!(f, "poly")?;
                for k in cs {
                    write!(f, " {}", format_complex(*k))?;
                }
                Ok(())
            }
            Node::Mobius(m) => write!(f, "mobius {}", format_complex(m.a)),
            Node::Blaschke { zeros, m } => {
                let zs: Vec<String> = zeros.iter().map(|(s, _)| format_complex(s.a)).collect();
                write!(f, "blaschke m={m} [{}]", zs.join(", "))
            }
            Node::Dilation { c: k, inner } => write!(f, "dilate {} ({inner})", format_complex(*k)),
            Node::HPrimitive { weight, c: k } => write!(f, "hprim {} ({weight})", format_complex(*k)),
            Node::Sum(ts) => {
                write!(f, "sum")?;
                for t in ts {
                    write!(f, " ({t})")?;
                }
                Ok(())
            }
            Node::Product(ts) => {
                write!(f, "mul")?;
                for t in ts {
                    write!(f, " ({t})")?;
                }
                Ok(())
            }
            Node::IntPower(b, n) => write!(f, "pow ({b}) {n}"),
            Node::Compose { outer, inner, .. } => write!(f, "compose ({outer}) ({inner})"),
        }
    }
}
