//! IDT process constructions and their associated Lévy processes.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::kernels::{homogeneity_violation, KernelSpec};
use crate::levy::{for_each_path, positive_stable, weighted_increments, LevyModel, StableKind};
use crate::linalg::psd_factor;
use crate::measure::{exponent_mu, MeasureHalfLine};
use crate::rng;
use crate::sample::{check_times, merge_sorted, position, JointSample};
use crate::sheet::weighted_strip;
#[allow(unused_imports)]
use num_traits::Float;

/// Default number of integration cells per unit length.
pub const BASE_CELLS: usize = 1 << 10;
/// Upper bound on integration cells per unit length after refinement.
pub const MAX_CELLS: usize = 1 << 16;

/// Samplers of one-dimensional marginal laws.
pub trait MarginalSampler {
    fn label(&self) -> String;
    fn sample_marginal(&self, t: f64, count: usize, seed: u64) -> Result<Vec<f64>>;
}

/// Samplers of finite-dimensional laws along a single realisation per replica.
pub trait ProcessSampler: MarginalSampler {
    /// Joint draws at strictly increasing nonnegative `times`.
    fn sample_at(&self, times: &[f64], count: usize, seed: u64) -> Result<JointSample>;
}

/// A function tabulated at increasing abscissae, linearly interpolated, zero outside.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tabulated {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
}

impl Tabulated {
    pub fn new(xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let t = Self { xs, values };
        t.validate()?;
        Ok(t)
    }

    /// Tabulates `f` at `n + 1` equally spaced points of `[a, b]`.
    pub fn from_fn(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Self {
        let xs: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
        let values = xs.iter().map(|&x| f(x)).collect();
        Self { xs, values }
    }

    pub fn validate(&self) -> Result<()> {
        if self.xs.is_empty() {
            return Err(invalid("tabulation", "empty tabulation"));
        }
        if self.xs.len() != self.values.len() {
            return Err(invalid(
                "tabulation",
                format!(
                    "{} abscissae but {} values",
                    self.xs.len(),
                    self.values.len()
                ),
            ));
        }
        if self.xs.len() < 2 {
            return Err(invalid("tabulation", "need at least two points"));
        }
        if self.xs.iter().chain(&self.values).any(|v| !v.is_finite()) {
            return Err(invalid("tabulation", "values must be finite"));
        }
        if self.xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid(
                "tabulation",
                "abscissae must be strictly increasing",
            ));
        }
        Ok(())
    }

    pub fn support(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = self.support();
        if x < a || x > b {
            return 0.0;
        }
        let i = self.xs.partition_point(|v| *v <= x);
        if i == self.xs.len() {
            return self.values[i - 1];
        }
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let w = (x - x0) / (x1 - x0);
        self.values[i - 1] * (1.0 - w) + self.values[i] * w
    }
}

/// The construction catalogue.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "construction", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum IdtSpec {
    /// A Lévy process, its own associated process.
    Levy { model: LevyModel },
    /// `ξ^{1/2} G_t` with `ξ` positive `(α/2)`-stable and `G` Gaussian with a
    /// `(2/α)`-homogeneous covariance.
    SubGaussian { alpha: f64, kernel: KernelSpec },
    /// `t^{2/α} X_{1/t}` for a symmetric strictly α-stable Lévy process `X`.
    TimeInversion {
        alpha: f64,
        #[cfg_attr(feature = "serde", serde(default = "one"))]
        scale: f64,
    },
    /// `∫₀^t φ(u/t) dB_u`.
    IntegralPhi { phi: Tabulated },
    /// `∫₀^S f(s) dL_{ts}`.
    IntegralFLevy { f: Tabulated, model: LevyModel },
    /// `∫ μ(dγ) L_{γt}`.
    MeasureMix {
        mu: MeasureHalfLine,
        model: LevyModel,
    },
    /// `t ∫ μ(dγ) L_γ` for a symmetric Cauchy process `L`.
    SatoMix { mu: MeasureHalfLine, scale: f64 },
    /// `√t ∫ μ(dγ) B_γ`.
    GaussianMix { mu: MeasureHalfLine },
}

#[cfg(feature = "serde")]
fn one() -> f64 {
    1.0
}

impl IdtSpec {
    pub const VARIANTS: [&'static str; 8] = [
        "levy",
        "sub_gaussian",
        "time_inversion",
        "integral_phi",
        "integral_f_levy",
        "measure_mix",
        "sato_mix",
        "gaussian_mix",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Levy { .. } => "levy",
            Self::SubGaussian { .. } => "sub_gaussian",
            Self::TimeInversion { .. } => "time_inversion",
            Self::IntegralPhi { .. } => "integral_phi",
            Self::IntegralFLevy { .. } => "integral_f_levy",
            Self::MeasureMix { .. } => "measure_mix",
            Self::SatoMix { .. } => "sato_mix",
            Self::GaussianMix { .. } => "gaussian_mix",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Levy { model } => model.validate(),
            Self::SubGaussian { alpha, kernel } => {
                if !(*alpha > 0.0 && *alpha < 2.0) {
                    return Err(invalid(
                        "alpha",
                        format!("sub-Gaussian needs α in (0,2), got {alpha}"),
                    ));
                }
                let k = kernel.build()?;
                let (v, (s, t, l)) = homogeneity_violation(&k, 2.0 / alpha);
                if v > 1e-9 {
                    return Err(Error::Precondition(format!(
                        "kernel {} is not {}-homogeneous: worst probe (s,t)=({s},{t}) at scale {l}",
                        k.label,
                        2.0 / alpha
                    )));
                }
                Ok(())
            }
            Self::TimeInversion { alpha, scale } => {
                if !(*alpha > 0.0 && *alpha <= 2.0) {
                    return Err(invalid(
                        "alpha",
                        format!("time inversion needs α in (0,2], got {alpha}"),
                    ));
                }
                if !(*scale > 0.0 && scale.is_finite()) {
                    return Err(invalid("scale", "must be positive"));
                }
                Ok(())
            }
            Self::IntegralPhi { phi } => {
                phi.validate()?;
                let (a, b) = phi.support();
                if a > 0.0 || b < 1.0 {
                    return Err(invalid(
                        "phi",
                        format!("φ must be tabulated on [0,1], covers [{a},{b}]"),
                    ));
                }
                Ok(())
            }
            Self::IntegralFLevy { f, model } => {
                f.validate()?;
                if f.support().0 < 0.0 {
                    return Err(invalid("f", "support must lie in [0, ∞)"));
                }
                model.validate()
            }
            Self::MeasureMix { mu, model } => {
                mu.validate()?;
                model.validate()?;
                if !model.has_finite_mean() {
                    return Err(Error::Precondition(format!(
                        "measure mixing needs E|L₁| < ∞; {model:?} has no finite first moment"
                    )));
                }
                Ok(())
            }
            Self::SatoMix { mu, scale } => {
                mu.validate()?;
                if !(*scale > 0.0 && scale.is_finite()) {
                    return Err(invalid("scale", "must be positive"));
                }
                Ok(())
            }
            Self::GaussianMix { mu } => mu.validate(),
        }
    }
}

/// Driving stable model of a time inversion.
fn inversion_driver(alpha: f64, scale: f64) -> LevyModel {
    if alpha == 2.0 {
        LevyModel::BrownianDrift {
            drift: 0.0,
            variance: scale * scale,
        }
    } else if alpha == 1.0 {
        LevyModel::Cauchy { scale }
    } else {
        LevyModel::StableStrict {
            alpha,
            scale,
            kind: StableKind::Symmetric,
        }
    }
}

/// Number of cells per unit length: doubled from `base` until the left-point
/// discretisation of `∫ f²` changes by less than 1% under one more doubling.
pub fn refined_cells(f: &dyn Fn(f64) -> f64, a: f64, b: f64, base: usize) -> usize {
    let proxy = |n: usize| {
        let h = (b - a) / n as f64;
        (0..n).map(|i| f(a + i as f64 * h).powi(2) * h).sum::<f64>()
    };
    let len_units = ((b - a).ceil() as usize).max(1);
    let mut n = base.max(1) * len_units;
    while n < MAX_CELLS * len_units {
        let (p1, p2) = (proxy(n), proxy(2 * n));
        if (p1 - p2).abs() <= 0.01 * p2.abs() {
            break;
        }
        n *= 2;
    }
    n
}

/// Quadrature nodes `(γ, weight)` for `∫ μ(dγ) g(γ)`: atoms exactly, density pieces by
/// the trapezoid rule.
pub fn mixing_nodes(mu: &MeasureHalfLine, base: usize) -> Vec<(f64, f64)> {
    let mut nodes: Vec<(f64, f64)> = mu.atoms.iter().map(|a| (a.location, a.mass)).collect();
    for p in &mu.density_pieces {
        let len = p.right - p.left;
        let n = base.max(1) * (len.ceil() as usize).max(1);
        let h = len / n as f64;
        for i in 0..=n {
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            nodes.push((p.left + i as f64 * h, p.level * h * w));
        }
    }
    nodes
}

/// A sampler for an [`IdtSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct IdtProcess {
    pub spec: IdtSpec,
    pub base_cells: usize,
}

impl IdtProcess {
    pub fn new(spec: IdtSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            spec,
            base_cells: BASE_CELLS,
        })
    }

    pub fn with_cells(mut self, cells: usize) -> Self {
        self.base_cells = cells.max(1);
        self
    }

    fn sample_positive(&self, times: &[f64], count: usize, seed: u64) -> Result<JointSample> {
        let mut out = JointSample::zeros(times, count, seed);
        match &self.spec {
            IdtSpec::Levy { model } => {
                let grid: Vec<f64> = core::iter::once(0.0).chain(times.iter().copied()).collect();
                for_each_path(model, &grid, count, seed, |r, p| {
                    out.row_mut(r).copy_from_slice(&p[1..])
                })?;
            }
            IdtSpec::SubGaussian { alpha, kernel } => {
                let k = kernel.build()?;
                let f = psd_factor(&k.gram(times), times.len())?;
                let mut zr = rng::stream(seed, 0);
                let mut xr = rng::stream(seed, 1);
                let mut z = alloc::vec![0.0; f.rank];
                for r in 0..count {
                    for zi in z.iter_mut() {
                        *zi = zr.sample(StandardNormal);
                    }
                    let xi = positive_stable(alpha / 2.0, &mut xr).sqrt();
                    let row = out.row_mut(r);
                    f.apply(&z, row);
                    row.iter_mut().for_each(|v| *v *= xi);
                }
            }
            IdtSpec::TimeInversion { alpha, scale } => {
                let inv: Vec<f64> = times.iter().rev().map(|t| 1.0 / t).collect();
                let grid: Vec<f64> = core::iter::once(0.0).chain(inv.iter().copied()).collect();
                let w = times.len();
                let driver = inversion_driver(*alpha, *scale);
                for_each_path(&driver, &grid, count, seed, |r, p| {
                    let row = out.row_mut(r);
                    for (k, &t) in times.iter().enumerate() {
                        row[k] = t.powf(2.0 / alpha) * p[w - k];
                    }
                })?;
            }
            IdtSpec::IntegralPhi { phi } => {
                let n = refined_cells(&|x| phi.eval(x), 0.0, 1.0, self.base_cells);
                let weights: Vec<f64> = (0..n).map(|i| phi.eval(i as f64 / n as f64)).collect();
                let model = LevyModel::standard_brownian();
                integrate_increments(&model, times, 1.0, n, &weights, count, seed, &mut out)?;
            }
            IdtSpec::IntegralFLevy { f, model } => {
                let s = f.support().1;
                let n = refined_cells(&|x| f.eval(x), 0.0, s, self.base_cells);
                let weights: Vec<f64> = (0..n).map(|i| f.eval(s * i as f64 / n as f64)).collect();
                integrate_increments(model, times, s, n, &weights, count, seed, &mut out)?;
            }
            IdtSpec::MeasureMix { mu, model } => {
                let nodes = mixing_nodes(mu, self.base_cells);
                let grid = merge_sorted(
                    core::iter::once(0.0).chain(
                        times
                            .iter()
                            .flat_map(|&t| nodes.iter().map(move |n| n.0 * t)),
                    ),
                );
                if let [t] = times {
                    let scaled: Vec<(f64, f64)> = nodes.iter().map(|n| (n.0 * t, n.1)).collect();
                    let v = weighted_increments(
                        model,
                        &grid,
                        &suffix_weights(&grid, &scaled),
                        count,
                        seed,
                    )?;
                    for (r, x) in v.into_iter().enumerate() {
                        out.row_mut(r)[0] = x;
                    }
                    return Ok(out);
                }
                let idx: Vec<Vec<usize>> = times
                    .iter()
                    .map(|&t| nodes.iter().map(|n| position(&grid, n.0 * t)).collect())
                    .collect();
                for_each_path(model, &grid, count, seed, |r, p| {
                    let row = out.row_mut(r);
                    for (k, ix) in idx.iter().enumerate() {
                        row[k] = nodes.iter().zip(ix).map(|(n, &i)| n.1 * p[i]).sum();
                    }
                })?;
            }
            IdtSpec::SatoMix { mu, scale } => {
                let nodes = mixing_nodes(mu, self.base_cells);
                mix_one_path(
                    &LevyModel::Cauchy { scale: *scale },
                    &nodes,
                    times,
                    |t| t,
                    count,
                    seed,
                    &mut out,
                )?;
            }
            IdtSpec::GaussianMix { mu } => {
                let nodes = mixing_nodes(mu, self.base_cells);
                mix_one_path(
                    &LevyModel::standard_brownian(),
                    &nodes,
                    times,
                    Float::sqrt,
                    count,
                    seed,
                    &mut out,
                )?;
            }
        }
        Ok(out)
    }

    /// The associated Lévy process.
    pub fn associated(&self) -> Result<AssociatedLevy> {
        Ok(match &self.spec {
            IdtSpec::Levy { model } => AssociatedLevy::ClosedForm(model.clone()),
            IdtSpec::SubGaussian { alpha, kernel } => {
                let r11 = kernel.build()?.eval(1.0, 1.0);
                let scale = (r11 / 2.0).sqrt();
                AssociatedLevy::ClosedForm(if *alpha == 1.0 {
                    LevyModel::Cauchy { scale }
                } else {
                    LevyModel::StableStrict {
                        alpha: *alpha,
                        scale,
                        kind: StableKind::Symmetric,
                    }
                })
            }
            IdtSpec::TimeInversion { alpha, scale } => {
                AssociatedLevy::ClosedForm(inversion_driver(*alpha, *scale))
            }
            IdtSpec::IntegralPhi { phi } => {
                let n = refined_cells(&|x| phi.eval(x), 0.0, 1.0, self.base_cells);
                AssociatedLevy::SheetBased(SheetRecipe {
                    model: LevyModel::standard_brownian(),
                    functional: SheetFunctional::increments(1.0, n, |x| phi.eval(x)),
                })
            }
            IdtSpec::IntegralFLevy { f, model } => {
                let s = f.support().1;
                let n = refined_cells(&|x| f.eval(x), 0.0, s, self.base_cells);
                AssociatedLevy::SheetBased(SheetRecipe {
                    model: model.clone(),
                    functional: SheetFunctional::increments(s, n, |x| f.eval(x)),
                })
            }
            IdtSpec::MeasureMix { mu, model } => AssociatedLevy::SheetBased(SheetRecipe {
                model: model.clone(),
                functional: SheetFunctional::Points {
                    nodes: mixing_nodes(mu, self.base_cells),
                },
            }),
            IdtSpec::SatoMix { mu, scale } => AssociatedLevy::SheetBased(SheetRecipe {
                model: LevyModel::Cauchy { scale: *scale },
                functional: SheetFunctional::Points {
                    nodes: mixing_nodes(mu, self.base_cells),
                },
            }),
            IdtSpec::GaussianMix { mu } => AssociatedLevy::SheetBased(SheetRecipe {
                model: LevyModel::standard_brownian(),
                functional: SheetFunctional::Points {
                    nodes: mixing_nodes(mu, self.base_cells),
                },
            }),
        })
    }
}

/// `Σ wᵢ (L_{t s_{i+1}} − L_{t s_i})` over `s_i = S·i/n` for every `t`, one path per replica.
#[allow(clippy::too_many_arguments)]
fn integrate_increments(
    model: &LevyModel,
    times: &[f64],
    support: f64,
    n: usize,
    weights: &[f64],
    count: usize,
    seed: u64,
    out: &mut JointSample,
) -> Result<()> {
    let node = |t: f64, i: usize| t * support * i as f64 / n as f64;
    if let [t] = times {
        let grid: Vec<f64> = (0..=n).map(|i| node(*t, i)).collect();
        for (r, v) in weighted_increments(model, &grid, weights, count, seed)?
            .into_iter()
            .enumerate()
        {
            out.row_mut(r)[0] = v;
        }
        return Ok(());
    }
    let grid = merge_sorted(times.iter().flat_map(|&t| (0..=n).map(move |i| node(t, i))));
    let idx: Vec<Vec<usize>> = times
        .iter()
        .map(|&t| (0..=n).map(|i| position(&grid, node(t, i))).collect())
        .collect();
    for_each_path(model, &grid, count, seed, |r, p| {
        let row = out.row_mut(r);
        for (k, ix) in idx.iter().enumerate() {
            row[k] = weights
                .iter()
                .zip(ix.windows(2))
                .map(|(w, i)| w * (p[i[1]] - p[i[0]]))
                .sum();
        }
    })
}

/// `factor(t) · Σ_k w_k L_{γ_k}` from one path of `model`.
fn mix_one_path(
    model: &LevyModel,
    nodes: &[(f64, f64)],
    times: &[f64],
    factor: impl Fn(f64) -> f64,
    count: usize,
    seed: u64,
    out: &mut JointSample,
) -> Result<()> {
    let grid = merge_sorted(core::iter::once(0.0).chain(nodes.iter().map(|n| n.0)));
    if grid.len() < 2 {
        return Ok(());
    }
    let factors: Vec<f64> = times.iter().map(|&t| factor(t)).collect();
    let base = weighted_increments(model, &grid, &suffix_weights(&grid, nodes), count, seed)?;
    for (r, b) in base.into_iter().enumerate() {
        for (v, f) in out.row_mut(r).iter_mut().zip(&factors) {
            *v = f * b;
        }
    }
    Ok(())
}

/// Cell weights `Wᵢ = Σ_{k : γ_k > gᵢ} w_k`, so that `Σ_k w_k L_{γ_k} = Σᵢ Wᵢ (L_{gᵢ₊₁} − L_{gᵢ})`.
fn suffix_weights(grid: &[f64], nodes: &[(f64, f64)]) -> Vec<f64> {
    let mut w = alloc::vec![0.0; grid.len() - 1];
    for &(g, m) in nodes {
        let k = position(grid, g);
        w[..k].iter_mut().for_each(|x| *x += m);
    }
    w
}

impl MarginalSampler for IdtProcess {
    fn label(&self) -> String {
        format!("idt:{}", self.spec.name())
    }

    fn sample_marginal(&self, t: f64, count: usize, seed: u64) -> Result<Vec<f64>> {
        Ok(self.sample_at(&[t], count, seed)?.values)
    }
}

impl ProcessSampler for IdtProcess {
    fn sample_at(&self, times: &[f64], count: usize, seed: u64) -> Result<JointSample> {
        sample_with_zero_times(times, count, seed, |pos, c, s| {
            self.sample_positive(pos, c, s)
        })
    }
}

/// Runs `inner` on the positive times only and fills zero columns for `t = 0`.
pub(crate) fn sample_with_zero_times(
    times: &[f64],
    count: usize,
    seed: u64,
    inner: impl FnOnce(&[f64], usize, u64) -> Result<JointSample>,
) -> Result<JointSample> {
    if count == 0 {
        return Err(Error::EmptyRequest);
    }
    check_times(times)?;
    let zeros = usize::from(times[0] == 0.0);
    let mut out = JointSample::zeros(times, count, seed);
    if zeros == times.len() {
        return Ok(out);
    }
    let inner = inner(&times[zeros..], count, seed)?;
    for r in 0..count {
        out.row_mut(r)[zeros..].copy_from_slice(inner.row(r));
    }
    Ok(out)
}

/// How a sheet-based associated sampler reads a sheet column at `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum SheetFunctional {
    /// `Σ wᵢ (L̃_{s_{i+1}, t} − L̃_{s_i, t})`.
    Increments { grid: Vec<f64>, weights: Vec<f64> },
    /// `Σ w_k L̃_{γ_k, t}`.
    Points { nodes: Vec<(f64, f64)> },
}

impl SheetFunctional {
    /// Left-point weights `f(s_i)` on `n` equal cells of `[0, support]`.
    pub fn increments(support: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        let grid: Vec<f64> = (0..=n).map(|i| support * i as f64 / n as f64).collect();
        let weights = grid[..n].iter().map(|&s| f(s)).collect();
        Self::Increments { grid, weights }
    }
}

/// A marginal sampler reading a functional off a Lévy sheet.
#[derive(Debug, Clone, PartialEq)]
pub struct SheetRecipe {
    pub model: LevyModel,
    pub functional: SheetFunctional,
}

/// The associated Lévy process of an IDT construction.
#[derive(Debug, Clone, PartialEq)]
pub enum AssociatedLevy {
    ClosedForm(LevyModel),
    SheetBased(SheetRecipe),
}

impl AssociatedLevy {
    /// The Lévy symbol, available in closed form only.
    pub fn symbol(&self, lam: f64) -> Option<Complex64> {
        match self {
            Self::ClosedForm(m) => Some(m.symbol(lam)),
            Self::SheetBased(_) => None,
        }
    }
}

impl MarginalSampler for AssociatedLevy {
    fn label(&self) -> String {
        match self {
            Self::ClosedForm(m) => format!("levy:{m:?}"),
            Self::SheetBased(r) => format!("sheet:{:?}", r.model),
        }
    }

    fn sample_marginal(&self, t: f64, count: usize, seed: u64) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(Error::EmptyRequest);
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("time must be nonnegative, got {t}")));
        }
        match self {
            Self::ClosedForm(m) => crate::levy::sample_marginal(m, t, count, seed),
            Self::SheetBased(recipe) => {
                if t == 0.0 {
                    return Ok(alloc::vec![0.0; count]);
                }
                match &recipe.functional {
                    SheetFunctional::Increments { grid, weights } => {
                        weighted_strip(&recipe.model, grid, t, weights, count, seed)
                    }
                    SheetFunctional::Points { nodes } => {
                        let grid =
                            merge_sorted(core::iter::once(0.0).chain(nodes.iter().map(|n| n.0)));
                        if grid.len() < 2 {
                            return Ok(alloc::vec![0.0; count]);
                        }
                        weighted_strip(
                            &recipe.model,
                            &grid,
                            t,
                            &suffix_weights(&grid, nodes),
                            count,
                            seed,
                        )
                    }
                }
            }
        }
    }
}

/// A sampler run at a rescaled clock: `Y_t = X_{factor·t}`.
#[derive(Debug, Clone)]
pub struct TimeScaled<S> {
    pub inner: S,
    pub factor: f64,
}

impl<S: MarginalSampler> MarginalSampler for TimeScaled<S> {
    fn label(&self) -> String {
        format!("{}@{}t", self.inner.label(), self.factor)
    }

    fn sample_marginal(&self, t: f64, count: usize, seed: u64) -> Result<Vec<f64>> {
        self.inner.sample_marginal(self.factor * t, count, seed)
    }
}

impl<S: ProcessSampler> ProcessSampler for TimeScaled<S> {
    fn sample_at(&self, times: &[f64], count: usize, seed: u64) -> Result<JointSample> {
        let scaled: Vec<f64> = times.iter().map(|t| t * self.factor).collect();
        let mut s = self.inner.sample_at(&scaled, count, seed)?;
        s.times = times.to_vec();
        Ok(s)
    }
}

/// The residual `U^{(c)}` with `U^{(c)}_t =law X_{(1−c)t}`.
pub fn temporal_residual<S>(sampler: S, c: f64) -> Result<TimeScaled<S>> {
    if !(c > 0.0 && c < 1.0) {
        return Err(invalid("c", format!("must lie in (0,1), got {c}")));
    }
    Ok(TimeScaled {
        inner: sampler,
        factor: 1.0 - c,
    })
}

/// The weak-Brownian splice as a process sampler.
#[derive(Debug, Clone, Copy, Default)]
pub struct WeakBrownian;

impl MarginalSampler for WeakBrownian {
    fn label(&self) -> String {
        "weak_bm".into()
    }

    fn sample_marginal(&self, t: f64, count: usize, seed: u64) -> Result<Vec<f64>> {
        Ok(self.sample_at(&[t], count, seed)?.values)
    }
}

impl ProcessSampler for WeakBrownian {
    fn sample_at(&self, times: &[f64], count: usize, seed: u64) -> Result<JointSample> {
        if count == 0 {
            return Err(Error::EmptyRequest);
        }
        crate::kernels::weak_bm_joint(times, count, seed)
    }
}

impl<T: MarginalSampler + ?Sized> MarginalSampler for Box<T> {
    fn label(&self) -> String {
        (**self).label()
    }

    fn sample_marginal(&self, t: f64, count: usize, seed: u64) -> Result<Vec<f64>> {
        (**self).sample_marginal(t, count, seed)
    }
}

impl<T: MarginalSampler + ?Sized> MarginalSampler for &T {
    fn label(&self) -> String {
        (**self).label()
    }

    fn sample_marginal(&self, t: f64, count: usize, seed: u64) -> Result<Vec<f64>> {
        (**self).sample_marginal(t, count, seed)
    }
}

impl<T: ProcessSampler + ?Sized> ProcessSampler for &T {
    fn sample_at(&self, times: &[f64], count: usize, seed: u64) -> Result<JointSample> {
        (**self).sample_at(times, count, seed)
    }
}

fn build(spec: IdtSpec) -> Result<(IdtProcess, AssociatedLevy)> {
    let p = IdtProcess::new(spec)?;
    let a = p.associated()?;
    Ok((p, a))
}

pub fn build_levy(model: LevyModel) -> Result<(IdtProcess, AssociatedLevy)> {
    build(IdtSpec::Levy { model })
}

pub fn build_sub_gaussian(alpha: f64, kernel: KernelSpec) -> Result<(IdtProcess, AssociatedLevy)> {
    build(IdtSpec::SubGaussian { alpha, kernel })
}

pub fn build_time_inversion(alpha: f64, scale: f64) -> Result<(IdtProcess, AssociatedLevy)> {
    build(IdtSpec::TimeInversion { alpha, scale })
}

pub fn build_integral_phi(phi: Tabulated) -> Result<(IdtProcess, AssociatedLevy)> {
    build(IdtSpec::IntegralPhi { phi })
}

pub fn build_integral_f_levy(
    f: Tabulated,
    model: LevyModel,
) -> Result<(IdtProcess, AssociatedLevy)> {
    build(IdtSpec::IntegralFLevy { f, model })
}

pub fn build_measure_mix(
    mu: MeasureHalfLine,
    model: LevyModel,
) -> Result<(IdtProcess, AssociatedLevy)> {
    build(IdtSpec::MeasureMix { mu, model })
}

pub fn build_sato_mix(mu: MeasureHalfLine, scale: f64) -> Result<(IdtProcess, AssociatedLevy)> {
    build(IdtSpec::SatoMix { mu, scale })
}

pub fn build_gaussian_mix(mu: MeasureHalfLine) -> Result<(IdtProcess, AssociatedLevy)> {
    build(IdtSpec::GaussianMix { mu })
}

/// Closed-form marginal symbol `ψ_t` of a construction at time `t`, where known.
pub fn marginal_exponent(spec: &IdtSpec, t: f64, lam: f64) -> Result<Option<Complex64>> {
    Ok(match spec {
        IdtSpec::Levy { model } => Some(model.symbol(lam) * t),
        IdtSpec::MeasureMix { mu, model } => Some(exponent_mu(model, mu, lam)? * t),
        IdtSpec::SatoMix { mu, scale } => {
            Some(exponent_mu(&LevyModel::Cauchy { scale: *scale }, mu, lam)? * t)
        }
        IdtSpec::GaussianMix { mu } => Some(Complex64::new(
            -0.5 * lam * lam * t * mu.min_kernel_mass(),
            0.0,
        )),
        IdtSpec::TimeInversion { alpha, scale } => {
            Some(inversion_driver(*alpha, *scale).symbol(lam) * t)
        }
        IdtSpec::SubGaussian { .. } => {
            let p = IdtProcess::new(spec.clone())?;
            p.associated()?.symbol(lam).map(|s| s * t)
        }
        _ => None,
    })
}
