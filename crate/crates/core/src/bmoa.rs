//! Weighted BMOA seminorms by three routes and VMOA diagnostics.
//!
//! All routes reduce to a list of per-level maxima: levels are the radii
//! `1 - 2^-j` of the disk grid (or the arc lengths `2^-j`), and the tail
//! of that list decides membership of the vanishing class.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::AnalyticMap;
use crate::cplx::c;
use crate::error::{Error, Result};
use crate::hardy::{arc_eta_p, foci_at_radius, gamma_boundary_unchecked, ArcSpec, Exponent, QuadConfig};
use crate::quad::{arc_breakpoints, integrate, Tolerance};
use crate::weights::WeightSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub level: u32,
    pub radius: f64,
    pub angle: f64,
    pub point: Complex64,
}

/// Sample points `rho_j e^{2 pi i k / n_j}` with `rho_j = 1 - 2^-j`. Level 0
/// is the origin alone; the angular count doubles past level 16.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskGrid {
    pub levels: u32,
    pub angles: usize,
    points: Vec<GridPoint>,
}

const DOUBLING_LEVEL: u32 = 16;
const MAX_LEVELS: u32 = 40;

impl Default for DiskGrid {
    fn default() -> Self {
        Self::new(24, 64).expect("default grid is valid")
    }
}

impl DiskGrid {
    pub fn new(levels: u32, angles: usize) -> Result<Self> {
        if levels == 0 || levels > MAX_LEVELS {
            return Err(Error::InvalidSymbol(format!("grid levels {levels} must lie in 1..={MAX_LEVELS}")));
        }
        if angles < 4 {
            return Err(Error::InvalidSymbol(format!("grid needs at least 4 angles, got {angles}")));
        }
        let mut points = vec![GridPoint { level: 0, radius: 0.0, angle: 0.0, point: c(0.0, 0.0) }];
        for j in 1..=levels {
            let radius = Self::radius(j);
            let n = Self::count(angles, j);
            points.extend((0..n).map(|k| {
                let angle = TAU * k as f64 / n as f64;
                GridPoint { level: j, radius, angle, point: Complex64::from_polar(radius, angle) }
            }));
        }
        Ok(Self { levels, angles, points })
    }

    pub fn radius(level: u32) -> f64 {
        1.0 - (-(level as f64)).exp2()
    }

    fn count(angles: usize, level: u32) -> usize {
        if level > DOUBLING_LEVEL {
            2 * angles
        } else {
            angles
        }
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    /// Points of `level >= from`.
    pub fn from_level(&self, from: u32) -> impl Iterator<Item = &GridPoint> {
        self.points.iter().filter(move |p| p.level >= from)
    }

    /// The points `a` with `|phi(a)| > r`.
    pub fn level_set(&self, phi: &AnalyticMap, r: f64) -> Result<Vec<GridPoint>> {
        let mut out = Vec::new();
        for p in &self.points {
            if phi.eval(p.point)?.norm() > r {
                out.push(*p);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailClass {
    DecayingToZero,
    Bounded,
    Diverging,
    Inconclusive,
}

impl fmt::Display for TailClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TailClass::DecayingToZero => "decaying-to-zero",
            TailClass::Bounded => "bounded",
            TailClass::Diverging => "diverging",
            TailClass::Inconclusive => "inconclusive",
        })
    }
}

const TAIL_WINDOW: usize = 8;
/// Per-level log2 slope separating a flat tail from a moving one.
const FLAT_SLOPE: f64 = 0.02;
const MOVING_SLOPE: f64 = 0.04;
/// A decaying tail must have fallen below this fraction of the sup.
const DECAY_FRACTION: f64 = 0.5;

/// Least-squares slope of `log2 s_j` against `j` over the tail window.
pub fn tail_slope(maxima: &[f64]) -> Option<f64> {
    let tail = &maxima[maxima.len().saturating_sub(TAIL_WINDOW)..];
    if tail.len() < 3 || tail.iter().any(|s| !(*s > 0.0)) {
        return None;
    }
    let n = tail.len() as f64;
    let xm = (n - 1.0) / 2.0;
    let ys: Vec<f64> = tail.iter().map(|s| s.log2()).collect();
    let ym = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - xm;
        sxy += dx * (y - ym);
        sxx += dx * dx;
    }
    Some(sxy / sxx)
}

/// Classifies the tail of a list of per-level maxima.
pub fn classify_tail(maxima: &[f64]) -> TailClass {
    if maxima.len() < 3 {
        return TailClass::Inconclusive;
    }
    let last3 = &maxima[maxima.len() - 3..];
    if last3.iter().all(|s| *s == 0.0) {
        return TailClass::DecayingToZero;
    }
    let sup = maxima.iter().copied().fold(0.0, f64::max);
    let Some(slope) = tail_slope(maxima) else {
        return TailClass::Inconclusive;
    };
    let decreasing = last3.windows(2).all(|w| w[1] < w[0]);
    let increasing = last3.windows(2).all(|w| w[1] > w[0]);
    if slope <= -MOVING_SLOPE && decreasing && last3[2] <= DECAY_FRACTION * sup {
        TailClass::DecayingToZero
    } else if slope >= MOVING_SLOPE && increasing {
        TailClass::Diverging
    } else if slope.abs() <= FLAT_SLOPE {
        TailClass::Bounded
    } else {
        TailClass::Inconclusive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Garsia,
    Carleson,
    Arc,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Garsia => "garsia",
            Route::Carleson => "carleson",
            Route::Arc => "arc",
        })
    }
}

impl std::str::FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "garsia" => Ok(Route::Garsia),
            "carleson" => Ok(Route::Carleson),
            "arc" => Ok(Route::Arc),
            other => Err(Error::InvalidSymbol(format!("unknown route {other}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelMax {
    pub level: u32,
    /// Radius of the level, or `1 - m(I)` on the arc route.
    pub radius: f64,
    pub max: f64,
    pub witness_angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeminormProfile {
    pub route: Route,
    pub p: Exponent,
    pub levels: Vec<LevelMax>,
    pub sup: f64,
    pub witness: Complex64,
    pub tail: TailClass,
    pub tail_slope: Option<f64>,
    /// `|f(0)| + sup`.
    pub norm: f64,
}

impl SeminormProfile {
    fn assemble(route: Route, p: Exponent, levels: Vec<LevelMax>, f0: f64) -> Self {
        let mut sup = 0.0;
        let mut witness = c(0.0, 0.0);
        for l in &levels {
            if l.max > sup {
                sup = l.max;
                witness = Complex64::from_polar(l.radius, l.witness_angle);
            }
        }
        let maxima: Vec<f64> = levels.iter().map(|l| l.max).collect();
        Self {
            route,
            p,
            tail: classify_tail(&maxima),
            tail_slope: tail_slope(&maxima),
            levels,
            sup,
            witness,
            norm: f0 + sup,
        }
    }

    pub fn maxima(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.max).collect()
    }

    /// Largest level maximum over the levels with radius at least `r`.
    pub fn sup_from_radius(&self, r: f64) -> f64 {
        self.levels.iter().filter(|l| l.radius >= r).map(|l| l.max).fold(0.0, f64::max)
    }
}

/// Evaluates `value` on every point (in parallel) and reduces per level in
/// grid order, so the result does not depend on the thread count.
fn per_level<'a, I, F>(points: I, value: F) -> Result<Vec<LevelMax>>
where
    I: Iterator<Item = &'a GridPoint>,
    F: Fn(&GridPoint) -> Result<f64> + Sync,
{
    let pts: Vec<&GridPoint> = points.collect();
    let values: Vec<Result<f64>> = pts.par_iter().map(|p| value(p)).collect();
    let mut out: Vec<LevelMax> = Vec::new();
    for (p, v) in pts.iter().zip(values) {
        let v = v?;
        match out.last_mut() {
            Some(l) if l.level == p.level => {
                if v > l.max {
                    l.max = v;
                    l.witness_angle = p.angle;
                }
            }
            _ => out.push(LevelMax { level: p.level, radius: p.radius, max: v, witness_angle: p.angle }),
        }
    }
    Ok(out)
}

/// `sup_a v(a) gamma(f, a, p)` over the grid.
pub fn seminorm(f: &AnalyticMap, w: &WeightSpec, p: Exponent, grid: &DiskGrid, cfg: &QuadConfig) -> Result<SeminormProfile> {
    cfg.validate()?;
    f.validate()?;
    let f0 = f.eval(c(0.0, 0.0))?.norm();
    let levels = per_level(grid.points().iter(), |pt| {
        Ok(w.v(pt.point)? * gamma_boundary_unchecked(f, pt.point, p.value(), cfg)?.value)
    })?;
    Ok(SeminormProfile::assemble(Route::Garsia, p, levels, f0))
}

/// The `p = 2` profile whose tail decides membership of the vanishing class.
pub fn vmoa_profile(f: &AnalyticMap, w: &WeightSpec, grid: &DiskGrid, cfg: &QuadConfig) -> Result<SeminormProfile> {
    seminorm(f, w, Exponent::Two, grid, cfg)
}

/// `mu_f(S(z)) = int_{S(z)} |f'|^2 (1 - |w|^2) dA / pi` over
/// `S(z) = {0 < 1 - |w| < 2(1 - |z|), |arg w - arg z| < 2 pi (1 - |z|)}`.
pub fn carleson_box_measure(f: &AnalyticMap, z: Complex64) -> Result<f64> {
    let delta = 1.0 - z.norm();
    if !(z.norm() > 0.5 && delta > 0.0) {
        return Err(Error::Domain { z, node: "Carleson box center" });
    }
    let foci = f.foci();
    let narrowest = foci.iter().map(|f| f.width).fold(1.0f64, f64::min);
    let half = (2.0 * PI * delta).min(PI);
    let (lo, hi) = (z.arg() - half, z.arg() + half);
    let inner_r = 1.0 - 2.0 * delta;
    let mut breaks = vec![inner_r];
    let mut d = 2.0 * delta * 0.25;
    while d > 1e-15 && (breaks.len() < 4 || d > narrowest / 16.0) && breaks.len() < 30 {
        breaks.push(1.0 - d);
        d *= 0.25;
    }
    breaks.push(1.0);
    let tol = Tolerance::new(1e-300, 1e-7).with_max_panels(2000);
    let radial = integrate(
        |r: f64| {
            let fr = foci_at_radius(&foci, r);
            let angular = integrate(
                |t: f64| {
                    let (_, d) = f.eval_deriv_raw(Complex64::from_polar(r, t));
                    let v = d.norm_sqr();
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::NonFinite(format!("derivative of {f} at radius {r}")))
                    }
                },
                &arc_breakpoints(&fr, lo, hi, 4),
                tol,
            )?;
            Ok(angular.value * (1.0 - r) * (1.0 + r) * r / PI)
        },
        &breaks,
        tol,
    )?;
    Ok(radial.value)
}

/// `sqrt(sup v(z)^2 mu_f(S(z)) / (1 - |z|))` over grid centers with
/// `|z| > 1/2`, on the scale of the `p = 2` seminorm.
pub fn carleson_seminorm(f: &AnalyticMap, w: &WeightSpec, grid: &DiskGrid, cfg: &QuadConfig) -> Result<SeminormProfile> {
    cfg.validate()?;
    f.validate()?;
    let f0 = f.eval(c(0.0, 0.0))?.norm();
    let levels = if f.is_constant() {
        grid.from_level(2)
            .filter(|p| p.angle == 0.0)
            .map(|p| LevelMax { level: p.level, radius: p.radius, max: 0.0, witness_angle: 0.0 })
            .collect()
    } else {
        per_level(grid.from_level(2), |pt| {
            let mu = carleson_box_measure(f, pt.point)?;
            Ok(w.v(pt.point)? * (mu / (1.0 - pt.radius)).sqrt())
        })?
    };
    Ok(SeminormProfile::assemble(Route::Carleson, Exponent::Two, levels, f0))
}

/// Dyadic arc lengths `2^-1 ..= 2^-lengths` with `centers` equally spaced
/// centers each.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcGrid {
    pub lengths: u32,
    pub centers: usize,
}

impl Default for ArcGrid {
    fn default() -> Self {
        Self { lengths: 20, centers: 32 }
    }
}

impl ArcGrid {
    pub fn new(lengths: u32, centers: usize) -> Result<Self> {
        if lengths == 0 || lengths > MAX_LEVELS || centers == 0 {
            return Err(Error::InvalidSymbol(format!("arc grid {lengths} x {centers} is empty or too deep")));
        }
        Ok(Self { lengths, centers })
    }

    fn points(&self) -> Vec<GridPoint> {
        (1..=self.lengths)
            .flat_map(|j| {
                let radius = DiskGrid::radius(j);
                (0..self.centers).map(move |k| {
                    let angle = TAU * k as f64 / self.centers as f64;
                    GridPoint { level: j, radius, angle, point: Complex64::from_polar(radius, angle) }
                })
            })
            .collect()
    }
}

/// `sup over arcs of v(1 - m(I)) eta(f, I, p)`. Level `j` holds the arcs
/// of length `2^-j`, reported at radius `1 - 2^-j`.
pub fn arc_seminorm(f: &AnalyticMap, w: &WeightSpec, p: Exponent, arcs: &ArcGrid, cfg: &QuadConfig) -> Result<SeminormProfile> {
    cfg.validate()?;
    f.validate()?;
    let f0 = f.eval(c(0.0, 0.0))?.norm();
    let pts = arcs.points();
    let levels = per_level(pts.iter(), |pt| {
        let arc = ArcSpec::new(pt.angle, 1.0 - pt.radius)?;
        Ok(w.v_radial(pt.radius)? * arc_eta_p(f, arc, p.value(), cfg)?.value)
    })?;
    Ok(SeminormProfile::assemble(Route::Arc, p, levels, f0))
}

/// Both sides of `sup_{m(I) <= R} v(1 - m(I)) eta(f, I, p) <= 2 sup_{|a| >= 1 - R} v(a) gamma(f, a, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcGarsiaComparison {
    pub max_length: f64,
    pub arc_sup: f64,
    pub garsia_sup: f64,
}

impl ArcGarsiaComparison {
    pub fn holds(&self) -> bool {
        self.arc_sup <= 2.0 * self.garsia_sup * (1.0 + 1e-9)
    }
}

pub fn compare_arc_garsia(arc: &SeminormProfile, garsia: &SeminormProfile, max_length: f64) -> ArcGarsiaComparison {
    let r = 1.0 - max_length;
    ArcGarsiaComparison { max_length, arc_sup: arc.sup_from_radius(r), garsia_sup: garsia.sup_from_radius(r) }
}

/// `seminorm(f, w, 1) / seminorm(f, w, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PRatio {
    pub p1: f64,
    pub p2: f64,
    pub ratio: f64,
    /// Both seminorms vanish; the ratio is then 1 by convention.
    pub degenerate: bool,
}

pub fn p_independence_ratio(f: &AnalyticMap, w: &WeightSpec, grid: &DiskGrid, cfg: &QuadConfig) -> Result<PRatio> {
    let p1 = seminorm(f, w, Exponent::One, grid, cfg)?.sup;
    let p2 = seminorm(f, w, Exponent::Two, grid, cfg)?.sup;
    Ok(ratio_of(p1, p2))
}

pub fn ratio_of(p1: f64, p2: f64) -> PRatio {
    if p2 == 0.0 {
        PRatio { p1, p2, ratio: 1.0, degenerate: true }
    } else {
        PRatio { p1, p2, ratio: p1 / p2, degenerate: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilationProfile {
    pub scalars: Vec<f64>,
    /// `||T_c f - f||_{BMOA_v}` at each scalar.
    pub norms: Vec<f64>,
    pub reference: f64,
    pub decaying: bool,
}

/// `||T_c f - f||` along `c_k = 1 - 2^-k`; decaying when the last value is
/// below `tol` times the norm of `f`.
pub fn dilation_convergence(
    f: &AnalyticMap,
    w: &WeightSpec,
    ks: &[u32],
    tol: f64,
    grid: &DiskGrid,
    cfg: &QuadConfig,
) -> Result<DilationProfile> {
    let reference = seminorm(f, w, Exponent::Two, grid, cfg)?.norm;
    let mut scalars = Vec::with_capacity(ks.len());
    let mut norms = Vec::with_capacity(ks.len());
    for &k in ks {
        let s = 1.0 - (-(k as f64)).exp2();
        let diff = AnalyticMap::dilate(f.clone(), c(s, 0.0))?.sub(f);
        scalars.push(s);
        norms.push(seminorm(&diff, w, Exponent::Two, grid, cfg)?.norm);
    }
    let last = norms.last().copied().unwrap_or(0.0);
    Ok(DilationProfile { scalars, norms, reference, decaying: last <= tol * reference })
}
