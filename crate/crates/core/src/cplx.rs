//! Small complex helpers that keep precision near zero.

use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `log(1 + z)` on the principal branch, accurate for small `|z|`.
pub fn ln_1p(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let re = if x.abs() + y.abs() < 0.5 {
        0.5 * (2.0 * x + x * x + y * y).ln_1p()
    } else {
        (1.0 + x).hypot(y).ln()
    };
    let im = y.atan2(1.0 + x);
    c(re, im)
}

/// `exp(z) - 1`, accurate for small `|z|`.
pub fn exp_m1(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let s = (0.5 * y).sin();
    let re = x.exp_m1() * y.cos() - 2.0 * s * s;
    let im = x.exp() * y.sin();
    c(re, im)
}

/// Principal power `z^p` for real `p`, with `0^p = 0` for `p > 0`.
pub fn powf(z: Complex64, p: f64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return if p > 0.0 { c(0.0, 0.0) } else if p == 0.0 { c(1.0, 0.0) } else { c(f64::INFINITY, 0.0) };
    }
    (z.ln() * p).exp()
}
