//! Adaptive Simpson quadrature (real and complex integrands).

use core::ops::{Add, Mul, Sub};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

const MAX_DEPTH: u32 = 48;

/// Values that adaptive Simpson can integrate.
pub trait Integrand:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn norm(self) -> f64;
}

impl Integrand for f64 {
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
}

/// Integrates `f` over `[a, b]` by adaptive Simpson to absolute tolerance `tol`.
pub fn adaptive_simpson<T: Integrand>(f: impl Fn(f64) -> T, a: f64, b: f64, tol: f64) -> T {
    if a == b {
        return f(a) * 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

fn simpson<T: Integrand>(a: f64, b: f64, fa: T, fm: T, fb: T) -> T {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn recurse<T: Integrand>(
    f: &impl Fn(f64) -> T,
    a: f64,
    b: f64,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: f64,
    depth: u32,
) -> T {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return left + right + delta * (1.0 / 15.0);
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Composite Simpson rule on `intervals` (even) equal subintervals.
pub fn composite_simpson<T: Integrand>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    intervals: usize,
) -> T {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc = acc + f(a + i as f64 * h) * w;
    }
    acc * (h / 3.0)
}

/// Composite Simpson weights for `intervals` (even) subintervals of `[a, b]`.
pub fn simpson_weights(a: f64, b: f64, intervals: usize) -> alloc::vec::Vec<(f64, f64)> {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    (0..=n)
        .map(|i| {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (a + i as f64 * h, w * h / 3.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrates_smooth_functions() {
        let v = adaptive_simpson(|x: f64| x.sin(), 0.0, core::f64::consts::PI, 1e-12);
        assert_relative_eq!(v, 2.0, epsilon = 1e-11);
        let v = adaptive_simpson(|x: f64| (-x * x).exp(), -6.0, 6.0, 1e-12);
        assert_relative_eq!(v, core::f64::consts::PI.sqrt(), epsilon = 1e-11);
    }

    #[test]
    fn integrates_complex_functions() {
        let v = adaptive_simpson(|x: f64| Complex64::new(0.0, x).exp(), 0.0, 1.0, 1e-13);
        let exact = Complex64::new(1.0f64.sin(), 1.0 - 1.0f64.cos());
        assert!((v - exact).norm() < 1e-12);
    }

    #[test]
    fn composite_rule_is_exact_on_cubics() {
        let v = composite_simpson(|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, 2);
        assert_relative_eq!(v, 0.0, epsilon = 1e-14);
        let w: f64 = simpson_weights(0.0, 3.0, 16).iter().map(|p| p.1).sum();
        assert_relative_eq!(w, 3.0, epsilon = 1e-14);
    }
}
