//! Empirical characteristic functions with CLT bands, two-sample KS, and moment checks.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::report::VerdictReport;
use crate::sample::JointSample;
#[allow(unused_imports)]
use num_traits::Float;

/// Half-width multiplier of every CLT band.
pub const BAND_SIGMAS: f64 = 3.0;
/// Significance of each KS sub-test.
pub const KS_LEVEL: f64 = 0.01;
/// Default probe multipliers, divided by an inverse-scale estimate of the sample.
pub const LAMBDA_MULTIPLIERS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];
/// Default two-point probes, divided coordinatewise by inverse-scale estimates.
pub const JOINT_PROBES: [[f64; 2]; 5] =
    [[0.25, 0.25], [0.5, 0.5], [1.0, 1.0], [0.5, 1.0], [1.0, 0.5]];

/// Monte Carlo settings: replicas per evaluation and base seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McParams {
    pub count: usize,
    pub seed: u64,
}

/// Draws of a scalar or vector law, stored row-major with `dim` coordinates per draw.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalLaw {
    pub samples: Vec<f64>,
    pub dim: usize,
    pub label: String,
    pub seed: u64,
}

impl EmpiricalLaw {
    pub fn scalar(label: impl Into<String>, samples: Vec<f64>, seed: u64) -> Self {
        Self {
            samples,
            dim: 1,
            label: label.into(),
            seed,
        }
    }

    pub fn from_joint(label: impl Into<String>, s: &JointSample) -> Self {
        Self {
            samples: s.values.clone(),
            dim: s.width(),
            label: label.into(),
            seed: s.seed,
        }
    }

    pub fn count(&self) -> usize {
        self.samples.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn coordinate(&self, k: usize) -> Vec<f64> {
        self.samples
            .iter()
            .skip(k)
            .step_by(self.dim)
            .copied()
            .collect()
    }

    /// `(1/n) Σ exp(i θ·x)`.
    pub fn ecf(&self, theta: &[f64]) -> Complex64 {
        let n = self.count();
        let mut acc = Complex64::new(0.0, 0.0);
        for row in self.samples.chunks_exact(self.dim) {
            let phase: f64 = row.iter().zip(theta).map(|(x, t)| x * t).sum();
            let (s, c) = phase.sin_cos();
            acc.re += c;
            acc.im += s;
        }
        acc / n as f64
    }

    fn check(&self) -> Result<()> {
        if self.dim == 0 || self.samples.is_empty() || !self.samples.len().is_multiple_of(self.dim)
        {
            return Err(Error::Precondition(format!(
                "empirical law `{}` is empty or ragged",
                self.label
            )));
        }
        Ok(())
    }
}

/// CLT half-width for an empirical CF average of `n` unit-modulus terms.
pub fn ecf_band(n: usize) -> f64 {
    BAND_SIGMAS * SQRT_2 / (n as f64).sqrt()
}

/// Median of `|x|` (falling back to the mean of `|x|`, then 1) as an inverse probe scale.
pub fn probe_scale(xs: &[f64]) -> f64 {
    let mut a: Vec<f64> = xs
        .iter()
        .map(|x| x.abs())
        .filter(|x| x.is_finite())
        .collect();
    if a.is_empty() {
        return 1.0;
    }
    a.sort_by(|x, y| x.total_cmp(y));
    let med = a[a.len() / 2];
    if med > 0.0 {
        return med;
    }
    let mean = a.iter().sum::<f64>() / a.len() as f64;
    if mean > 0.0 {
        mean
    } else {
        1.0
    }
}

/// Default probes for comparing `a` and `b`: scalar multipliers or two-point pairs,
/// scaled by the pooled per-coordinate [`probe_scale`].
pub fn default_probes(a: &EmpiricalLaw, b: &EmpiricalLaw) -> Vec<Vec<f64>> {
    let scales: Vec<f64> = (0..a.dim)
        .map(|k| {
            let mut pooled = a.coordinate(k);
            pooled.extend(b.coordinate(k));
            probe_scale(&pooled)
        })
        .collect();
    match a.dim {
        1 => LAMBDA_MULTIPLIERS
            .iter()
            .map(|m| vec![m / scales[0]])
            .collect(),
        2 => JOINT_PROBES
            .iter()
            .map(|p| vec![p[0] / scales[0], p[1] / scales[1]])
            .collect(),
        d => LAMBDA_MULTIPLIERS
            .iter()
            .map(|m| (0..d).map(|k| m / scales[k]).collect())
            .collect(),
    }
}

fn check_pair(a: &EmpiricalLaw, b: &EmpiricalLaw, probes: &[Vec<f64>]) -> Result<()> {
    a.check()?;
    b.check()?;
    if a.dim != b.dim {
        return Err(Error::Precondition(format!(
            "dimension mismatch: {} vs {}",
            a.dim, b.dim
        )));
    }
    if probes.is_empty() {
        return Err(Error::Precondition("empty probe grid".into()));
    }
    if let Some(p) = probes.iter().find(|p| p.len() != a.dim) {
        return Err(Error::Precondition(format!(
            "probe of length {} for dimension {}",
            p.len(),
            a.dim
        )));
    }
    Ok(())
}

/// `max_θ |φ̂_a(θ) − φ̂_b(θ)|` against `3√2 (1/√n_a + 1/√n_b)`.
pub fn ecf_distance(
    a: &EmpiricalLaw,
    b: &EmpiricalLaw,
    probes: &[Vec<f64>],
) -> Result<VerdictReport> {
    check_pair(a, b, probes)?;
    let (stat, at) = probes
        .iter()
        .map(|p| ((a.ecf(p) - b.ecf(p)).norm(), p))
        .fold(
            (0.0, &probes[0]),
            |acc, x| if x.0 > acc.0 { x } else { acc },
        );
    let thr = ecf_band(a.count()) + ecf_band(b.count());
    Ok(VerdictReport::new(
        format!("ecf_distance[{} vs {}]", a.label, b.label),
        stat,
        thr,
    )
    .with_meta("n_a", a.count())
    .with_meta("n_b", b.count())
    .with_meta("seed_a", a.seed)
    .with_meta("seed_b", b.seed)
    .with_meta("worst_probe", format!("{at:?}")))
}

/// `max_θ |φ̂_a(θ) − φ̂_b(θ)ⁿ|`.
///
/// Since `|zⁿ − wⁿ| <= n·m^{n−1}|z − w|` when `|z|, |w| <= m`, the band is
/// `band_a + n·m^{n−1}·band_b` with `m = min(1, max_θ |φ̂_b(θ)| + band_b)`.
pub fn ecf_power_check(
    a: &EmpiricalLaw,
    b: &EmpiricalLaw,
    n: u32,
    probes: &[Vec<f64>],
) -> Result<VerdictReport> {
    check_pair(a, b, probes)?;
    if n == 0 {
        return Err(Error::Precondition("power must be at least 1".into()));
    }
    let band_a = ecf_band(a.count());
    let band_b = ecf_band(b.count());
    let mut stat: f64 = 0.0;
    let mut m: f64 = 0.0;
    for p in probes {
        let pb = b.ecf(p);
        m = m.max(pb.norm());
        stat = stat.max((a.ecf(p) - pb.powu(n)).norm());
    }
    let m = (m + band_b).min(1.0);
    let thr = band_a + f64::from(n) * m.powi(n as i32 - 1) * band_b;
    Ok(VerdictReport::new(
        format!("ecf_power[{} vs {}^{n}]", a.label, b.label),
        stat,
        thr,
    )
    .with_meta("power", n)
    .with_meta("modulus_bound", m)
    .with_meta("n_a", a.count())
    .with_meta("n_b", b.count()))
}

/// `max_θ |φ̂_a(θ) − φ(θ)|` against the one-sample band.
pub fn ecf_vs_exact(
    a: &EmpiricalLaw,
    exact: impl Fn(&[f64]) -> Complex64,
    probes: &[Vec<f64>],
) -> Result<VerdictReport> {
    a.check()?;
    if probes.is_empty() {
        return Err(Error::Precondition("empty probe grid".into()));
    }
    let stat = probes
        .iter()
        .map(|p| (a.ecf(p) - exact(p)).norm())
        .fold(0.0, f64::max);
    Ok(
        VerdictReport::new(format!("ecf_exact[{}]", a.label), stat, ecf_band(a.count()))
            .with_meta("n", a.count()),
    )
}

/// Kolmogorov survival function `Q(λ) = 2 Σ (−1)^{k−1} e^{−2k²λ²}`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = f64::from(k);
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// `λ` with `Q(λ) = level`.
pub fn kolmogorov_critical(level: f64) -> f64 {
    let (mut lo, mut hi) = (0.2, 5.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_q(mid) > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a − F_b|` (ties handled).
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(|p, q| p.total_cmp(q));
    y.sort_by(|p, q| p.total_cmp(q));
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = if x[i].total_cmp(&y[j]).is_le() {
            x[i]
        } else {
            y[j]
        };
        while i < x.len() && x[i].total_cmp(&v).is_le() {
            i += 1;
        }
        while j < y.len() && y[j].total_cmp(&v).is_le() {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Two-sample KS with the asymptotic p-value; passes iff `p >= 0.01`. The threshold is
/// the critical `D` at that level.
pub fn ks_two_sample(a: &EmpiricalLaw, b: &EmpiricalLaw) -> Result<VerdictReport> {
    a.check()?;
    b.check()?;
    if a.dim != 1 || b.dim != 1 {
        return Err(Error::Unsupported(
            "KS is defined for scalar samples only".into(),
        ));
    }
    let d = ks_statistic(&a.samples, &b.samples);
    let (n, m) = (a.count() as f64, b.count() as f64);
    let en = (n * m / (n + m)).sqrt();
    let p = kolmogorov_q(en * d);
    let crit = kolmogorov_critical(KS_LEVEL) / en;
    Ok(
        VerdictReport::new(format!("ks[{} vs {}]", a.label, b.label), d, crit)
            .with_meta("p_value", p)
            .with_meta("n_a", a.count())
            .with_meta("n_b", b.count())
            .with_meta("seed_a", a.seed)
            .with_meta("seed_b", b.seed),
    )
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Sample variance against `expected` with the Gaussian band `3√(2σ⁴/n)`.
pub fn variance_test(name: &str, xs: &[f64], expected: f64) -> VerdictReport {
    let v = variance(xs);
    let band = BAND_SIGMAS * (2.0 * expected * expected / xs.len() as f64).sqrt();
    VerdictReport::new(format!("variance[{name}]"), (v - expected).abs(), band)
        .with_meta("sample_variance", v)
        .with_meta("expected", expected)
}

/// Sample mean against `expected`, band `3·sd/√n` with the sample standard deviation.
pub fn mean_test(name: &str, xs: &[f64], expected: f64) -> VerdictReport {
    let m = mean(xs);
    let band = BAND_SIGMAS * (variance(xs) / xs.len() as f64).sqrt();
    VerdictReport::new(format!("mean[{name}]"), (m - expected).abs(), band)
        .with_meta("sample_mean", m)
        .with_meta("expected", expected)
}

/// Sample correlation of two equally long samples.
pub fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Correlation against zero with the null band `3/√n`.
pub fn independence_test(name: &str, x: &[f64], y: &[f64]) -> VerdictReport {
    let r = correlation(x, y);
    VerdictReport::new(
        format!("uncorrelated[{name}]"),
        r.abs(),
        BAND_SIGMAS / (x.len() as f64).sqrt(),
    )
    .with_meta("correlation", r)
}

/// Named composite tests built on the samplers of the construction catalogue.
pub mod composite {
    use alloc::format;
    use alloc::vec::Vec;

    use super::{default_probes, ecf_power_check, ks_two_sample, EmpiricalLaw, McParams};
    use crate::constructions::{temporal_residual, MarginalSampler, ProcessSampler};
    use crate::error::Result;
    use crate::ito::{ito_verdict, weak_ito_sides, TestFunction};
    use crate::levy::LevyModel;
    use crate::report::VerdictReport;
    use crate::rng::derive_seed;

    /// KS between an IDT sampler and its associated Lévy sampler at each `t`.
    pub fn association_test(
        idt: &dyn MarginalSampler,
        associated: &dyn MarginalSampler,
        times: &[f64],
        mc: McParams,
    ) -> Result<VerdictReport> {
        let mut subs = Vec::with_capacity(times.len());
        for (k, &t) in times.iter().enumerate() {
            let k = k as u64;
            let x = idt.sample_marginal(t, mc.count, derive_seed(mc.seed, 2 * k))?;
            let y = associated.sample_marginal(t, mc.count, derive_seed(mc.seed, 2 * k + 1))?;
            let r = ks_two_sample(
                &EmpiricalLaw::scalar(format!("{} t={t}", idt.label()), x, mc.seed),
                &EmpiricalLaw::scalar(format!("{} t={t}", associated.label()), y, mc.seed),
            )?;
            subs.push(r.with_meta("t", t));
        }
        Ok(
            VerdictReport::all_of(format!("association {}", idt.label()), subs)
                .with_meta("seed", mc.seed),
        )
    }

    /// Empirical CF of `X_{nt}` against the `n`-th power of that of `X_t`.
    pub fn idt_marginal_test(
        sampler: &dyn MarginalSampler,
        n: u32,
        t: f64,
        mc: McParams,
    ) -> Result<VerdictReport> {
        let a = sampler.sample_marginal(f64::from(n) * t, mc.count, derive_seed(mc.seed, 1))?;
        let b = sampler.sample_marginal(t, mc.count, derive_seed(mc.seed, 2))?;
        let a = EmpiricalLaw::scalar(format!("X_{{{n}t}}"), a, mc.seed);
        let b = EmpiricalLaw::scalar("X_t", b, mc.seed);
        let mut r = ecf_power_check(&a, &b, n, &default_probes(&a, &b))?;
        r.name = format!("idt_marginal {} n={n} t={t}", sampler.label());
        Ok(r.with_meta("seed", mc.seed))
    }

    /// Joint CF of `(X_{nt₁}, …)` against the `n`-th power of that of `(X_{t₁}, …)`.
    pub fn idt_joint_test(
        sampler: &dyn ProcessSampler,
        n: u32,
        times: &[f64],
        mc: McParams,
    ) -> Result<VerdictReport> {
        let scaled: Vec<f64> = times.iter().map(|t| f64::from(n) * t).collect();
        let a = sampler.sample_at(&scaled, mc.count, derive_seed(mc.seed, 1))?;
        let b = sampler.sample_at(times, mc.count, derive_seed(mc.seed, 2))?;
        let a = EmpiricalLaw::from_joint("X(n·)", &a);
        let b = EmpiricalLaw::from_joint("X(·)", &b);
        let mut r = ecf_power_check(&a, &b, n, &default_probes(&a, &b))?;
        r.name = format!("idt_joint {} n={n} times={times:?}", sampler.label());
        Ok(r.with_meta("seed", mc.seed))
    }

    /// KS of `X_t` against `X_{ct} + U^{(c)}_t` with independent summands.
    pub fn decomposition_test<S: MarginalSampler + Clone>(
        sampler: &S,
        c: f64,
        t: f64,
        mc: McParams,
    ) -> Result<VerdictReport> {
        let residual = temporal_residual(sampler.clone(), c)?;
        let whole = sampler.sample_marginal(t, mc.count, derive_seed(mc.seed, 1))?;
        let head = sampler.sample_marginal(c * t, mc.count, derive_seed(mc.seed, 2))?;
        let tail = residual.sample_marginal(t, mc.count, derive_seed(mc.seed, 3))?;
        let sum: Vec<f64> = head.iter().zip(&tail).map(|(a, b)| a + b).collect();
        let mut r = ks_two_sample(
            &EmpiricalLaw::scalar("X_t", whole, mc.seed),
            &EmpiricalLaw::scalar("X_ct + U_t", sum, mc.seed),
        )?;
        r.name = format!("decomposition {} c={c} t={t}", sampler.label());
        Ok(r.with_meta("c", c).with_meta("seed", mc.seed))
    }

    /// Triplet-form weak Itô balance over all `(f, t)` combinations.
    pub fn ito_balance_test(
        model: &LevyModel,
        fs: &[TestFunction],
        times: &[f64],
        mc: McParams,
    ) -> Result<VerdictReport> {
        let mut subs = Vec::with_capacity(fs.len() * times.len());
        for (i, f) in fs.iter().enumerate() {
            for (j, &t) in times.iter().enumerate() {
                let seed = derive_seed(mc.seed, (i * times.len() + j) as u64);
                let sides = weak_ito_sides(
                    model,
                    f,
                    t,
                    McParams {
                        count: mc.count,
                        seed,
                    },
                )?;
                subs.push(ito_verdict(model, f, t, &sides));
            }
        }
        Ok(
            VerdictReport::all_of(format!("ito_balance {model:?}"), subs)
                .with_meta("seed", mc.seed),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ks_handles_ties_and_identity() {
        assert_eq!(ks_statistic(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 0.0);
        assert_relative_eq!(
            ks_statistic(&[0.0, 0.0, 1.0, 1.0], &[0.0, 1.0, 1.0, 1.0]),
            0.25
        );
        assert_relative_eq!(ks_statistic(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
    }

    #[test]
    fn kolmogorov_tail_values() {
        // Published quantiles of the Kolmogorov distribution.
        assert_relative_eq!(kolmogorov_critical(0.01), 1.627_62, epsilon = 1e-5);
        assert_relative_eq!(kolmogorov_critical(0.05), 1.358_10, epsilon = 1e-5);
        assert_relative_eq!(kolmogorov_q(1.0), 0.269_99, epsilon = 1e-5);
    }

    #[test]
    fn identical_samples_have_zero_distance() {
        let a = EmpiricalLaw::scalar("a", (0..2000).map(|i| (i as f64).sin()).collect(), 0);
        let probes = default_probes(&a, &a);
        let r = ecf_distance(&a, &a, &probes).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(r.pass);
        assert!(ecf_distance(&a, &a, &[]).is_err());
        let joint = EmpiricalLaw {
            samples: vec![0.0; 10],
            dim: 2,
            label: "j".into(),
            seed: 0,
        };
        assert!(ks_two_sample(&joint, &joint).is_err());
    }

    #[test]
    fn probe_scale_fallbacks() {
        assert_eq!(probe_scale(&[0.0, 0.0, 0.0]), 1.0);
        assert_relative_eq!(probe_scale(&[0.0, 0.0, 0.0, 4.0]), 1.0);
        assert_relative_eq!(probe_scale(&[-3.0, 1.0, 2.0]), 2.0);
    }
}
