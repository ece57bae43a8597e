//! Covariance kernels, Brownian-scaling checks and exact Gaussian sampling.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::SQRT_2;
use core::fmt;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::levy::{sample_at_times, LevyModel};
use crate::linalg::{psd_factor, LowRankFactor};
use crate::quad::adaptive_simpson;
use crate::report::VerdictReport;
use crate::rng;
use crate::sample::{check_times, merge_sorted, position, JointSample, PathSample};
#[allow(unused_imports)]
use num_traits::Float;

type KernelFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// A symmetric positive semidefinite function of two times.
#[derive(Clone)]
pub struct CovKernel {
    eval: Arc<KernelFn>,
    pub label: String,
    pub domain_hint: Option<(f64, f64)>,
}

impl fmt::Debug for CovKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CovKernel")
            .field("label", &self.label)
            .field("domain_hint", &self.domain_hint)
            .finish()
    }
}

impl CovKernel {
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(f),
            label: label.into(),
            domain_hint: None,
        }
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain_hint = Some((lo, hi));
        self
    }

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        (self.eval)(s, t)
    }

    /// Gram matrix on `times`, row-major.
    pub fn gram(&self, times: &[f64]) -> Vec<f64> {
        let n = times.len();
        let mut g = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = self.eval(times[i], times[j]);
                g[i * n + j] = v;
                g[j * n + i] = v;
            }
        }
        g
    }

    /// The empirical covariance of a joint sample; defined only at the sample's times
    /// (NaN elsewhere).
    pub fn empirical(sample: &JointSample) -> Self {
        let times = sample.times.clone();
        let w = sample.width();
        let n = sample.count as f64;
        let mut mean = alloc::vec![0.0; w];
        for r in 0..sample.count {
            for (m, v) in mean.iter_mut().zip(sample.row(r)) {
                *m += v / n;
            }
        }
        let mut cov = alloc::vec![0.0; w * w];
        for r in 0..sample.count {
            let row = sample.row(r);
            for i in 0..w {
                for j in 0..w {
                    cov[i * w + j] += (row[i] - mean[i]) * (row[j] - mean[j]) / (n - 1.0);
                }
            }
        }
        let lookup = move |x: f64| {
            times
                .iter()
                .position(|t| (t - x).abs() <= 1e-12 * x.abs().max(1.0))
        };
        Self::new("empirical", move |s, t| match (lookup(s), lookup(t)) {
            (Some(i), Some(j)) => cov[i * w + j],
            _ => f64::NAN,
        })
    }
}

/// Kernels addressable by name and parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum KernelSpec {
    /// `min(s, t)`.
    Brownian,
    /// `(st)^{1/2−H} · ½(s^{2H} + t^{2H} − |t−s|^{2H})`.
    FbmRescaled { h: f64 },
    /// `(st)^α · min(s^{1−2α}, t^{1−2α})`.
    TimeWarp { alpha: f64 },
    /// `(st)^{(1−α)/2} · k₀(s, t)` for an α-homogeneous `k₀`.
    GeneralRescale { base: Box<KernelSpec>, alpha: f64 },
    /// Fractional Brownian motion, `½(s^{2H} + t^{2H} − |t−s|^{2H})`.
    Fbm { h: f64 },
    /// `s·t`.
    Product,
    /// `√(st)`.
    Sqrt,
    /// The constant 1.
    Constant,
    /// `min(s, t)²`.
    MinSquared,
}

impl KernelSpec {
    pub fn build(&self) -> Result<CovKernel> {
        Ok(match self {
            Self::Brownian => brownian_kernel(),
            Self::FbmRescaled { h } => fbm_rescaled_kernel(*h)?,
            Self::TimeWarp { alpha } => time_warp_kernel(*alpha)?,
            Self::GeneralRescale { base, alpha } => general_rescale_kernel(&base.build()?, *alpha)?,
            Self::Fbm { h } => fbm_kernel(*h)?,
            Self::Product => CovKernel::new("product", |s, t| s * t),
            Self::Sqrt => CovKernel::new("sqrt", |s: f64, t: f64| (s * t).sqrt()),
            Self::Constant => CovKernel::new("constant", |_, _| 1.0),
            Self::MinSquared => CovKernel::new("min_squared", |s: f64, t: f64| s.min(t).powi(2)),
        })
    }
}

pub fn brownian_kernel() -> CovKernel {
    CovKernel::new("brownian", f64::min)
}

fn check_hurst(h: f64) -> Result<()> {
    if h > 0.0 && h < 1.0 {
        Ok(())
    } else {
        Err(invalid(
            "h",
            format!("Hurst index must lie in (0,1), got {h}"),
        ))
    }
}

fn fbm_cov(h: f64, s: f64, t: f64) -> f64 {
    0.5 * (s.powf(2.0 * h) + t.powf(2.0 * h) - (t - s).abs().powf(2.0 * h))
}

pub fn fbm_kernel(h: f64) -> Result<CovKernel> {
    check_hurst(h)?;
    Ok(CovKernel::new(format!("fbm(H={h})"), move |s, t| {
        fbm_cov(h, s, t)
    }))
}

/// Covariance of `t^{1/2−H} B^H_t`.
pub fn fbm_rescaled_kernel(h: f64) -> Result<CovKernel> {
    check_hurst(h)?;
    Ok(CovKernel::new(
        format!("fbm_rescaled(H={h})"),
        move |s: f64, t: f64| {
            if s == 0.0 || t == 0.0 {
                return 0.0;
            }
            (s * t).powf(0.5 - h) * fbm_cov(h, s, t)
        },
    ))
}

/// Covariance of `t^α B_{t^{1−2α}}`.
pub fn time_warp_kernel(alpha: f64) -> Result<CovKernel> {
    if !(alpha <= 0.5) {
        return Err(invalid(
            "alpha",
            format!("time warp needs α <= 1/2, got {alpha}"),
        ));
    }
    let e = 1.0 - 2.0 * alpha;
    Ok(CovKernel::new(
        format!("time_warp(α={alpha})"),
        move |s: f64, t: f64| {
            if s == 0.0 || t == 0.0 {
                return 0.0;
            }
            (s * t).powf(alpha) * s.powf(e).min(t.powf(e))
        },
    ))
}

const HOMOGENEITY_POINTS: [f64; 4] = [0.3, 1.0, 1.7, 2.5];
const HOMOGENEITY_SCALES: [f64; 3] = [0.5, 2.0, 3.0];

/// Largest relative violation of `k(λs, λt) = λ^degree k(s, t)` on a fixed probe grid,
/// with the pair and scale attaining it.
pub fn homogeneity_violation(k: &CovKernel, degree: f64) -> (f64, (f64, f64, f64)) {
    let mut worst = (0.0, (0.0, 0.0, 1.0));
    for &s in &HOMOGENEITY_POINTS {
        for &t in &HOMOGENEITY_POINTS {
            for &l in &HOMOGENEITY_SCALES {
                let lhs = k.eval(l * s, l * t);
                let rhs = l.powf(degree) * k.eval(s, t);
                let v = (lhs - rhs).abs() / (1.0 + rhs.abs());
                if !(v <= worst.0) {
                    worst = (if v.is_nan() { f64::INFINITY } else { v }, (s, t, l));
                }
            }
        }
    }
    worst
}

/// `(st)^{(1−α)/2} k₀(s, t)` for an α-homogeneous `k₀`.
pub fn general_rescale_kernel(k0: &CovKernel, alpha: f64) -> Result<CovKernel> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Precondition(format!(
            "rescaling needs α in [0,1], got {alpha}"
        )));
    }
    let (v, (s, t, l)) = homogeneity_violation(k0, alpha);
    if v > 1e-9 {
        return Err(Error::Precondition(format!(
            "{} is not {alpha}-homogeneous: worst probe (s,t)=({s},{t}) at scale {l}, violation {v:.3e}",
            k0.label
        )));
    }
    let base = k0.clone();
    let p = 0.5 * (1.0 - alpha);
    Ok(CovKernel::new(
        format!("rescale({}, α={alpha})", k0.label),
        move |s: f64, t: f64| {
            let w = (s * t).powf(p);
            if w == 0.0 {
                0.0
            } else {
                w * base.eval(s, t)
            }
        },
    ))
}

/// Checks `|k(αs, αt) − α k(s, t)| <= tol` over every scale and probe pair.
pub fn kernel_idt_check(
    k: &CovKernel,
    scales: &[f64],
    grid: &[(f64, f64)],
    tol: f64,
) -> VerdictReport {
    let mut worst = 0.0;
    let mut at = (f64::NAN, f64::NAN, f64::NAN);
    for &(s, t) in grid {
        for &a in scales {
            let v = (k.eval(a * s, a * t) - a * k.eval(s, t)).abs();
            if !(v <= worst) {
                worst = if v.is_nan() { f64::INFINITY } else { v };
                at = (s, t, a);
            }
        }
    }
    VerdictReport::new(format!("kernel_idt[{}]", k.label), worst, tol)
        .with_meta("worst_s", at.0)
        .with_meta("worst_t", at.1)
        .with_meta("worst_scale", at.2)
}

/// Checks that `e^{−(y+z)/2} k(e^y, e^z)` depends on `|y − z|` only: for each lag the
/// spread over base points `y ∈ {−2, …, 2}` must be at most `tol`.
pub fn lamperti_stationarity_check(k: &CovKernel, lags: &[f64], tol: f64) -> VerdictReport {
    let ct = |y: f64, z: f64| (-(y + z) / 2.0).exp() * k.eval(y.exp(), z.exp());
    let mut worst = 0.0;
    let mut worst_lag = f64::NAN;
    for &lag in lags {
        let vals: Vec<f64> = (-4..=4)
            .map(|i| f64::from(i) * 0.5)
            .map(|y| ct(y, y + lag))
            .collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let spread = if vals.iter().any(|v| v.is_nan()) {
            f64::INFINITY
        } else {
            hi - lo
        };
        if spread > worst {
            worst = spread;
            worst_lag = lag;
        }
    }
    VerdictReport::new(format!("lamperti_stationarity[{}]", k.label), worst, tol)
        .with_meta("worst_lag", worst_lag)
}

/// Centred Gaussian draws with covariance `gram` (n x n), from stream 0 of `seed`.
pub fn gaussian_from_gram(
    gram: &[f64],
    times: &[f64],
    count: usize,
    seed: u64,
) -> Result<JointSample> {
    if count == 0 {
        return Err(Error::EmptyRequest);
    }
    let f = psd_factor(gram, times.len())?;
    Ok(gaussian_from_factor(&f, times, count, seed))
}

pub fn gaussian_from_factor(
    f: &LowRankFactor,
    times: &[f64],
    count: usize,
    seed: u64,
) -> JointSample {
    let mut out = JointSample::zeros(times, count, seed);
    let mut rng = rng::stream(seed, 0);
    let mut z = alloc::vec![0.0; f.rank];
    for r in 0..count {
        for zi in z.iter_mut() {
            *zi = rng.sample(StandardNormal);
        }
        f.apply(&z, out.row_mut(r));
    }
    out
}

/// Exact centred Gaussian paths with covariance `k` on `times`.
pub fn sample_gaussian(
    k: &CovKernel,
    times: &[f64],
    count: usize,
    seed: u64,
) -> Result<Vec<PathSample>> {
    Ok(sample_gaussian_joint(k, times, count, seed)?.paths())
}

pub fn sample_gaussian_joint(
    k: &CovKernel,
    times: &[f64],
    count: usize,
    seed: u64,
) -> Result<JointSample> {
    check_times(times)?;
    gaussian_from_gram(&k.gram(times), times, count, seed)
}

/// `φ(x) = c·e^{−ax}` normalised so that `∫₀¹φ = ∫₀¹∫₀¹ φ(zx)φ(z) dz dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolterraPhi {
    pub a: f64,
    pub c: f64,
}

impl VolterraPhi {
    pub fn eval(&self, x: f64) -> f64 {
        self.c * (-self.a * x).exp()
    }
}

/// `e^{−u}(1 − e^{−u})/u`, extended by its limit 1 at `u = 0`.
fn volterra_integrand(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 - 1.5 * u
    } else {
        (-u).exp() * (-(-u).exp_m1()) / u
    }
}

/// Computes `c = (1 − e^{−a}) / ∫₀^a e^{−u}(1 − e^{−u}) du/u`; two quadrature
/// tolerances must agree to 1e−10 relative.
pub fn volterra_constant(a: f64) -> Result<VolterraPhi> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid(
            "a",
            format!("must be positive and finite, got {a}"),
        ));
    }
    let coarse = adaptive_simpson(volterra_integrand, 0.0, a, 1e-11 * a);
    let fine = adaptive_simpson(volterra_integrand, 0.0, a, 1e-14 * a);
    if ((coarse - fine) / fine).abs() > 1e-10 {
        return Err(Error::Contract(format!(
            "quadrature orders disagree: {coarse} vs {fine}"
        )));
    }
    Ok(VolterraPhi {
        a,
        c: -(-a).exp_m1() / fine,
    })
}

/// `∫₀¹φ(x)dx − ∫₀¹∫₀¹ φ(zx)φ(z) dz dx`, by nested quadrature.
pub fn volterra_eq2_residual(phi: &dyn Fn(f64) -> f64) -> f64 {
    let lhs = adaptive_simpson(phi, 0.0, 1.0, 1e-13);
    let rhs = adaptive_simpson(
        |x| adaptive_simpson(|z| phi(z * x) * phi(z), 0.0, 1.0, 1e-13),
        0.0,
        1.0,
        1e-12,
    );
    lhs - rhs
}

/// `φ(x) − ∫₀¹ φ(zx)φ(z) dz` at `x`; nonzero for the exponential family.
pub fn volterra_eq3_violation(phi: &dyn Fn(f64) -> f64, x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("probe must lie in (0,1), got {x}")));
    }
    Ok(phi(x) - adaptive_simpson(|z| phi(z * x) * phi(z), 0.0, 1.0, 1e-14))
}

/// Draws of `X_t = B_t` (t <= ½), `X_t = B_½ + (√2 − 1) B_{t−½}` (t > ½), all from one
/// Brownian path per replica.
pub fn weak_bm_joint(times: &[f64], count: usize, seed: u64) -> Result<JointSample> {
    check_times(times)?;
    if let Some(t) = times.iter().find(|t| **t > 1.0) {
        return Err(Error::Domain(format!(
            "the splice is validated on [0,1] only, got t = {t}"
        )));
    }
    let needed = merge_sorted(
        times
            .iter()
            .flat_map(|&t| if t <= 0.5 { [t, t] } else { [0.5, t - 0.5] })
            .filter(|t| *t > 0.0),
    );
    let mut out = JointSample::zeros(times, count, seed);
    if needed.is_empty() {
        return Ok(out);
    }
    let b = sample_at_times(&LevyModel::standard_brownian(), &needed, count, seed)?;
    let at = |row: &[f64], t: f64| {
        if t == 0.0 {
            0.0
        } else {
            row[position(&needed, t)]
        }
    };
    for r in 0..count {
        let src = b.row(r);
        let dst = out.row_mut(r);
        for (k, &t) in times.iter().enumerate() {
            dst[k] = if t <= 0.5 {
                at(src, t)
            } else {
                at(src, 0.5) + (SQRT_2 - 1.0) * at(src, t - 0.5)
            };
        }
    }
    Ok(out)
}

pub fn weak_bm_path(times: &[f64], count: usize, seed: u64) -> Result<Vec<PathSample>> {
    Ok(weak_bm_joint(times, count, seed)?.paths())
}

/// Exact covariance of the weak-Brownian splice.
pub fn weak_bm_covariance(s: f64, t: f64) -> f64 {
    let r = SQRT_2 - 1.0;
    let (s, t) = (s.min(t), s.max(t));
    if t <= 0.5 {
        s
    } else if s <= 0.5 {
        s.min(0.5) + r * s.min(t - 0.5)
    } else {
        0.5 + r * (t - 0.5).min(0.5) + r * (s - 0.5).min(0.5) + r * r * (s - 0.5).min(t - 0.5)
    }
}
