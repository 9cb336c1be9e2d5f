//! Adaptive Gauss-Kronrod quadrature on intervals and on circles.
//!
//! The interval integrator is globally adaptive: the panel with the largest
//! error estimate is bisected until the total error meets the tolerance.
//! Panels are processed in a fixed order, so results are bit-for-bit
//! reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{PI, TAU};
use std::ops::{Add, AddAssign, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values that can be integrated: real or complex scalars.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + AddAssign
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Stopping rule: stop once the error estimate is below `max(abs, rel*|I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel, max_panels: 4000 }
    }

    pub const fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

#[derive(Clone, Copy)]
struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

struct Ranked {
    error: f64,
    index: usize,
}

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ranked {}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.index.cmp(&self.index))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err;
    if res_asc != 0.0 && scaled != 0.0 {
        scaled = res_asc * (200.0 * scaled / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gk15<T, F>(f: &mut F, a: f64, b: f64) -> Result<(T, f64)>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut values = [T::zero(); 15];
    values[7] = f(center)?;
    for j in 0..7 {
        let dx = half * XGK[j];
        values[j] = f(center - dx)?;
        values[14 - j] = f(center + dx)?;
    }
    if let Some(bad) = values.iter().position(|v| !v.is_finite_value()) {
        let x = if bad == 7 {
            center
        } else if bad < 7 {
            center - half * XGK[bad]
        } else {
            center + half * XGK[14 - bad]
        };
        return Err(Error::NonFinite(format!("integrand at {x:e}")));
    }

    let mut kronrod = values[7] * WGK[7];
    let mut gauss = values[7] * WG[3];
    let mut res_abs = values[7].magnitude() * WGK[7];
    for j in 0..7 {
        let pair = values[j] + values[14 - j];
        kronrod += pair * WGK[j];
        res_abs += (values[j].magnitude() + values[14 - j].magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut res_asc = (values[7] - mean).magnitude() * WGK[7];
    for j in 0..7 {
        res_asc += ((values[j] - mean).magnitude() + (values[14 - j] - mean).magnitude()) * WGK[j];
    }
    let h = half.abs();
    let err = rescale_error((kronrod - gauss).magnitude() * h, res_abs * h, res_asc * h);
    Ok((kronrod * half, err))
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from the panels
/// delimited by `breaks` (which must be increasing).
pub fn integrate<T, F>(mut f: F, breaks: &[f64], tol: Tolerance) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    if breaks.len() < 2 {
        return Err(Error::QuadratureFault("need at least one panel".into()));
    }
    let mut panels: Vec<Panel<T>> = Vec::with_capacity(breaks.len() * 2);
    let mut heap = BinaryHeap::new();
    let mut total = T::zero();
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::QuadratureFault(format!("breakpoints not increasing near {}", w[0])));
        }
        let (value, error) = gk15(&mut f, w[0], w[1])?;
        total += value;
        total_err += error;
        heap.push(Ranked { error, index: panels.len() });
        panels.push(Panel { a: w[0], b: w[1], value, error });
    }

    let scale = breaks[0].abs().max(breaks[breaks.len() - 1].abs()).max(1.0);
    while total_err > tol.target(total.magnitude()) && panels.len() < tol.max_panels {
        let Some(top) = heap.pop() else { break };
        let p = panels[top.index];
        let mid = 0.5 * (p.a + p.b);
        if (p.b - p.a) <= 4.0 * f64::EPSILON * scale.max(mid.abs()) {
            // cannot bisect further; leave its error in the total
            continue;
        }
        let (lv, le) = gk15(&mut f, p.a, mid)?;
        let (rv, re) = gk15(&mut f, mid, p.b)?;
        total = total - p.value + lv + rv;
        total_err += le + re - p.error;
        panels[top.index] = Panel { a: p.a, b: mid, value: lv, error: le };
        heap.push(Ranked { error: le, index: top.index });
        heap.push(Ranked { error: re, index: panels.len() });
        panels.push(Panel { a: mid, b: p.b, value: rv, error: re });
    }

    // resum in position order so the result does not depend on refinement history
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = T::zero();
    let mut error = 0.0;
    for p in &panels {
        value += p.value;
        error += p.error;
    }
    Ok(QuadResult {
        value,
        error,
        panels: panels.len(),
        converged: error <= tol.target(value.magnitude()),
    })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// A point of the unit circle near which an integrand varies on scale `width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Focus {
    pub angle: f64,
    pub width: f64,
}

impl Focus {
    pub fn new(angle: f64, width: f64) -> Self {
        Self { angle: wrap_angle(angle), width: width.max(0.0) }
    }
}

/// Maps an angle into `[-pi, pi)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = (theta + PI).rem_euclid(TAU) - PI;
    if t >= PI {
        -PI
    } else {
        t
    }
}

const MIN_FOCUS_WIDTH: f64 = 1e-13;
const GRADING: f64 = 4.0;

/// Breakpoints on `[-pi, pi]` graded geometrically towards every focus.
pub fn circle_breakpoints(foci: &[Focus], baseline: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..=baseline).map(|k| -PI + TAU * k as f64 / baseline as f64).collect();
    for focus in foci {
        if !focus.angle.is_finite() {
            continue;
        }
        let base = focus.width.max(MIN_FOCUS_WIDTH);
        pts.push(focus.angle);
        let mut d = base;
        while d < PI {
            pts.push(wrap_angle(focus.angle + d));
            pts.push(wrap_angle(focus.angle - d));
            d *= GRADING;
        }
    }
    pts.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(pts.len());
    for p in pts {
        match out.last() {
            Some(&last) if p - last <= 1e-15 => {}
            _ => out.push(p),
        }
    }
    if let Some(last) = out.last_mut() {
        if PI - *last <= 1e-15 {
            *last = PI;
        } else {
            out.push(PI);
        }
    }
    out
}

/// Breakpoints on `[lo, hi]` (any real interval of length at most `2 pi`
/// or more), graded towards the foci.
pub fn arc_breakpoints(foci: &[Focus], lo: f64, hi: f64, baseline: usize) -> Vec<f64> {
    let base = circle_breakpoints(foci, baseline);
    let mut pts = vec![lo, hi];
    let turns = ((hi - lo) / TAU).ceil() as i64 + 1;
    let first = ((lo + PI) / TAU).floor() as i64;
    for shift in first - 1..=first + turns {
        let s = TAU * shift as f64;
        pts.extend(base.iter().map(|b| b + s).filter(|b| *b > lo && *b < hi));
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-15);
    pts
}

/// Normalized mean `(1/2pi) * integral of f(theta)` over the circle.
pub fn circle_mean<T, F>(f: F, foci: &[Focus], baseline: usize, tol: Tolerance) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    let breaks = circle_breakpoints(foci, baseline);
    let scaled = Tolerance { abs: tol.abs * TAU, ..tol };
    let mut r = integrate(f, &breaks, scaled)?;
    r.value = r.value * (1.0 / TAU);
    r.error /= TAU;
    Ok(r)
}

/// Trapezoid mean over `m` equispaced angles `2*pi*k/m`.
pub fn trapezoid_mean<F>(mut f: F, m: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut sum = 0.0;
    for k in 0..m {
        let v = f(TAU * k as f64 / m as f64)?;
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("trapezoid node {k}")));
        }
        sum += v;
    }
    Ok(sum / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TIGHT: Tolerance = Tolerance::new(1e-14, 1e-13);

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x: f64| Ok(x.powi(5) - 3.0 * x * x), &[0.0, 2.0], TIGHT).unwrap();
        assert!((r.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        // int_0^1 x^{-1/2} dx = 2
        let r = integrate(|x: f64| Ok(x.powf(-0.5)), &[0.0, 1.0], Tolerance::new(1e-7, 1e-7)).unwrap();
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-7, "{}", r.value);
    }

    #[test]
    fn narrow_peak_found_through_focus() {
        let eps: f64 = 1e-7;
        let foci = [Focus::new(0.3, eps)];
        let r = circle_mean(
            |t: f64| Ok(eps / ((t - 0.3).powi(2) + eps * eps)),
            &foci,
            16,
            Tolerance::new(1e-12, 1e-10),
        )
        .unwrap();
        let exact = ((PI - 0.3) / eps).atan() + ((PI + 0.3) / eps).atan();
        assert!((r.value * TAU - exact).abs() < 1e-8, "{} vs {}", r.value * TAU, exact);
    }

    #[test]
    fn complex_integrand() {
        let r = integrate(
            |x: f64| Ok(Complex64::new(0.0, x).exp()),
            &[0.0, PI],
            TIGHT,
        )
        .unwrap();
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn gauss_legendre_integrates_degree_2n_minus_1() {
        let (x, w) = gauss_legendre(7);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((s - 2.0 / 13.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn breakpoints_sorted_and_cover() {
        let b = circle_breakpoints(&[Focus::new(3.1, 1e-9), Focus::new(-3.1, 0.0)], 16);
        assert_eq!(b[0], -PI);
        assert_eq!(*b.last().unwrap(), PI);
        assert!(b.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn trapezoid_exact_for_trig_poly() {
        let m = trapezoid_mean(|t| Ok((3.0 * t).cos().powi(2)), 64).unwrap();
        assert!((m - 0.5).abs() < 1e-15);
    }
}
