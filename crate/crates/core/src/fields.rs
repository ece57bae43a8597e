//! Multiparameter IDT fields of type 1 (anisotropic scaling, `δ(n)` copies) and
//! type 2 (isotropic scaling, `n` copies).

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::constructions::{IdtProcess, IdtSpec, ProcessSampler};
use crate::error::{invalid, Error, Result};
use crate::kernels::gaussian_from_factor;
use crate::levy::{for_each_path, symmetric_stable, LevyModel, LevyTriplet};
use crate::linalg::psd_factor;
use crate::report::VerdictReport;
use crate::rng;
use crate::sample::{merge_sorted, position, JointSample};
use crate::verify::{
    default_probes, ecf_distance, ecf_power_check, ecf_vs_exact, independence_test, ks_two_sample,
    EmpiricalLaw, McParams,
};
#[allow(unused_imports)]
use num_traits::Float;

/// A point of `ℝ₊ᴺ`.
pub type MultiIndex = Vec<f64>;

/// `δ(a) = a₁⋯a_N`.
pub fn delta(a: &[f64]) -> f64 {
    a.iter().product()
}

/// `a.s = (a₁s₁, …, a_Ns_N)`.
pub fn dot_scale(a: &[f64], s: &[f64]) -> MultiIndex {
    a.iter().zip(s).map(|(x, y)| x * y).collect()
}

fn norm(s: &[f64]) -> f64 {
    s.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// One atom `mass · δ_scale` of a mixing measure on `ℝ₊ᴺ`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScaleAtom {
    pub scale: Vec<f64>,
    pub mass: f64,
}

/// Closed-form covariance `(s, t) ↦ Cov(X_s, X_t)` of a Gaussian field.
pub type FieldKernel = Box<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "field", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum FieldSpec {
    /// `(s₁⋯s_N)^{1/α} ξ` with `E e^{iλξ} = e^{−|λ|^α}`.
    Type1ProductStable { alpha: f64, n: usize },
    /// A one-parameter IDT process run at `s₁⋯s_N`.
    Type1FromIdt { inner: IdtSpec, n: usize },
    /// Centered Gaussian with covariance `∏ min(sᵢ, tᵢ)`.
    BrownianSheetField { n: usize },
    /// `Σⱼ Lʲ(sⱼ)` for independent Lévy processes.
    Type2SumLevy { models: Vec<LevyModel> },
    /// A one-parameter IDT process run at `⟨c, s⟩`.
    Type2Projection { inner: IdtSpec, weights: Vec<f64> },
    /// Lévy's Brownian motion with parameter in `ℝ₊ᴹ`: covariance `½(‖s‖ + ‖t‖ − ‖t − s‖)`.
    LevyParamBm { m: usize },
    /// `Σ_k m_k X(a_k.s)` for an atomic mixing measure on `ℝ₊ᴺ`.
    AtomicMix {
        base: Box<FieldSpec>,
        atoms: Vec<ScaleAtom>,
    },
    /// `Σⱼ Lʲ(ξʲ(sⱼ))` with independent chronometers `ξʲ`.
    Subordinated {
        models: Vec<LevyModel>,
        chronometers: Vec<IdtSpec>,
    },
}

impl FieldSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Type1ProductStable { .. } => "type1_product_stable",
            Self::Type1FromIdt { .. } => "type1_from_idt",
            Self::BrownianSheetField { .. } => "brownian_sheet_field",
            Self::Type2SumLevy { .. } => "type2_sum_levy",
            Self::Type2Projection { .. } => "type2_projection",
            Self::LevyParamBm { .. } => "levy_param_bm",
            Self::AtomicMix { .. } => "atomic_mix",
            Self::Subordinated { .. } => "subordinated",
        }
    }

    /// Number of parameters.
    pub fn dim(&self) -> usize {
        match self {
            Self::Type1ProductStable { n, .. }
            | Self::Type1FromIdt { n, .. }
            | Self::BrownianSheetField { n } => *n,
            Self::Type2SumLevy { models } | Self::Subordinated { models, .. } => models.len(),
            Self::Type2Projection { weights, .. } => weights.len(),
            Self::LevyParamBm { m } => *m,
            Self::AtomicMix { base, .. } => base.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim() == 0 {
            return Err(invalid("dimension", "fields need at least one parameter"));
        }
        match self {
            Self::Type1ProductStable { alpha, .. } => {
                if !(*alpha > 0.0 && *alpha <= 2.0) {
                    return Err(invalid("alpha", format!("must lie in (0,2], got {alpha}")));
                }
            }
            Self::Type1FromIdt { inner, .. } => inner.validate()?,
            Self::Type2Projection { inner, weights } => {
                inner.validate()?;
                if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
                    return Err(invalid("weights", "must be nonnegative and finite"));
                }
            }
            Self::Type2SumLevy { models } => models.iter().try_for_each(LevyModel::validate)?,
            Self::AtomicMix { base, atoms } => {
                base.validate()?;
                if atoms.is_empty() {
                    return Err(invalid("atoms", "mixing measure is empty"));
                }
                for a in atoms {
                    if a.scale.len() != base.dim()
                        || a.scale.iter().any(|x| !(*x >= 0.0 && x.is_finite()))
                    {
                        return Err(invalid(
                            "atoms",
                            format!("bad scale {:?} for dimension {}", a.scale, base.dim()),
                        ));
                    }
                    if !a.mass.is_finite() {
                        return Err(invalid("atoms", "mass must be finite"));
                    }
                }
            }
            Self::Subordinated {
                models,
                chronometers,
            } => {
                models.iter().try_for_each(LevyModel::validate)?;
                if chronometers.len() != models.len() {
                    return Err(invalid(
                        "chronometers",
                        format!(
                            "{} chronometers for {} coordinates",
                            chronometers.len(),
                            models.len()
                        ),
                    ));
                }
                chronometers.iter().try_for_each(IdtSpec::validate)?;
            }
            Self::BrownianSheetField { .. } | Self::LevyParamBm { .. } => {}
        }
        Ok(())
    }

    /// Covariance of centered Gaussian fields, where the variant has one in closed form.
    pub fn gaussian_kernel(&self) -> Option<FieldKernel> {
        match self {
            Self::BrownianSheetField { .. } => Some(Box::new(|s: &[f64], t: &[f64]| {
                s.iter().zip(t).map(|(a, b)| a.min(*b)).product()
            })),
            Self::LevyParamBm { .. } => Some(Box::new(|s: &[f64], t: &[f64]| {
                let d: Vec<f64> = s.iter().zip(t).map(|(a, b)| a - b).collect();
                0.5 * (norm(s) + norm(t) - norm(&d))
            })),
            Self::Type1ProductStable { alpha, .. } if *alpha == 2.0 => {
                Some(Box::new(|s: &[f64], t: &[f64]| {
                    2.0 * (delta(s) * delta(t)).sqrt()
                }))
            }
            Self::Type2SumLevy { models } => {
                let vars = models
                    .iter()
                    .map(|m| match m {
                        LevyModel::BrownianDrift { drift, variance } if *drift == 0.0 => {
                            Some(*variance)
                        }
                        _ => None,
                    })
                    .collect::<Option<Vec<f64>>>()?;
                Some(Box::new(move |s: &[f64], t: &[f64]| {
                    vars.iter()
                        .zip(s.iter().zip(t))
                        .map(|(v, (a, b))| v * a.min(*b))
                        .sum()
                }))
            }
            _ => None,
        }
    }
}

/// Joint draws of a field at a list of points, row-major with one row per replica.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub points: Vec<MultiIndex>,
    pub count: usize,
    pub values: Vec<f64>,
    pub seed: u64,
}

impl FieldSample {
    fn zeros(points: &[MultiIndex], count: usize, seed: u64) -> Self {
        Self {
            points: points.to_vec(),
            count,
            values: alloc::vec![0.0; count * points.len()],
            seed,
        }
    }

    pub fn width(&self) -> usize {
        self.points.len()
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let w = self.width();
        &self.values[r * w..(r + 1) * w]
    }

    fn row_mut(&mut self, r: usize) -> &mut [f64] {
        let w = self.width();
        &mut self.values[r * w..(r + 1) * w]
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.values
            .iter()
            .skip(k)
            .step_by(self.width())
            .copied()
            .collect()
    }

    pub fn law(&self, label: impl Into<String>) -> EmpiricalLaw {
        EmpiricalLaw {
            samples: self.values.clone(),
            dim: self.width(),
            label: label.into(),
            seed: self.seed,
        }
    }
}

fn check_points(spec: &FieldSpec, points: &[MultiIndex]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::EmptyRequest);
    }
    let n = spec.dim();
    for p in points {
        if p.len() != n {
            return Err(Error::InvalidGrid(format!(
                "point {p:?} has {} coordinates, field has {n}",
                p.len()
            )));
        }
        if p.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
            return Err(Error::InvalidGrid(format!(
                "point {p:?} is outside the nonnegative orthant"
            )));
        }
    }
    Ok(())
}

/// Joint draws at `points`, one realisation per replica.
pub fn sample_field(
    spec: &FieldSpec,
    points: &[MultiIndex],
    count: usize,
    seed: u64,
) -> Result<FieldSample> {
    spec.validate()?;
    check_points(spec, points)?;
    if count == 0 {
        return Err(Error::EmptyRequest);
    }
    let k = points.len();
    let mut out = FieldSample::zeros(points, count, seed);
    if let Some(kern) = spec.gaussian_kernel() {
        let mut gram = alloc::vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                gram[i * k + j] = kern(&points[i], &points[j]);
            }
        }
        let f = psd_factor(&gram, k)?;
        let labels: Vec<f64> = (0..k).map(|i| i as f64).collect();
        out.values = gaussian_from_factor(&f, &labels, count, seed).values;
        return Ok(out);
    }
    match spec {
        FieldSpec::Type1ProductStable { alpha, .. } => {
            let mut r = rng::stream(seed, 0);
            let factors: Vec<f64> = points.iter().map(|p| delta(p).powf(1.0 / alpha)).collect();
            for rep in 0..count {
                let xi = symmetric_stable(*alpha, &mut r);
                for (v, f) in out.row_mut(rep).iter_mut().zip(&factors) {
                    *v = f * xi;
                }
            }
        }
        FieldSpec::Type1FromIdt { inner, .. } => {
            let clock: Vec<f64> = points.iter().map(|p| delta(p)).collect();
            run_one_parameter(inner, &clock, count, seed, &mut out)?;
        }
        FieldSpec::Type2Projection { inner, weights } => {
            let clock: Vec<f64> = points
                .iter()
                .map(|p| weights.iter().zip(p).map(|(c, s)| c * s).sum())
                .collect();
            run_one_parameter(inner, &clock, count, seed, &mut out)?;
        }
        FieldSpec::Type2SumLevy { models } => {
            for (j, m) in models.iter().enumerate() {
                let coord: Vec<f64> = points.iter().map(|p| p[j]).collect();
                let grid = merge_sorted(core::iter::once(0.0).chain(coord.iter().copied()));
                if grid.len() < 2 {
                    continue;
                }
                let idx: Vec<usize> = coord.iter().map(|&s| position(&grid, s)).collect();
                let w = k;
                let vals = &mut out.values;
                for_each_path(
                    m,
                    &grid,
                    count,
                    rng::derive_seed(seed, j as u64),
                    |r, path| {
                        for (v, &i) in vals[r * w..(r + 1) * w].iter_mut().zip(&idx) {
                            *v += path[i];
                        }
                    },
                )?;
            }
        }
        FieldSpec::AtomicMix { base, atoms } => {
            let scaled: Vec<MultiIndex> = atoms
                .iter()
                .flat_map(|a| points.iter().map(move |p| dot_scale(&a.scale, p)))
                .collect();
            let inner = sample_field(base, &scaled, count, seed)?;
            for r in 0..count {
                let src = inner.row(r);
                let dst = out.row_mut(r);
                for (a_idx, a) in atoms.iter().enumerate() {
                    for (p, v) in dst.iter_mut().enumerate() {
                        *v += a.mass * src[a_idx * k + p];
                    }
                }
            }
        }
        FieldSpec::Subordinated {
            models,
            chronometers,
        } => {
            for (j, (m, chron)) in models.iter().zip(chronometers).enumerate() {
                sample_subordinated_coordinate(m, chron, j, points, count, seed, &mut out)?;
            }
        }
        FieldSpec::BrownianSheetField { .. } | FieldSpec::LevyParamBm { .. } => {
            unreachable!("Gaussian variants")
        }
    }
    Ok(out)
}

fn run_one_parameter(
    inner: &IdtSpec,
    clock: &[f64],
    count: usize,
    seed: u64,
    out: &mut FieldSample,
) -> Result<()> {
    let grid = merge_sorted(clock.iter().copied());
    let idx: Vec<usize> = clock.iter().map(|&c| position(&grid, c)).collect();
    let s = IdtProcess::new(inner.clone())?.sample_at(&grid, count, seed)?;
    for r in 0..count {
        let src = s.row(r);
        for (v, &i) in out.row_mut(r).iter_mut().zip(&idx) {
            *v = src[i];
        }
    }
    Ok(())
}

const CHRONOMETER_LABEL: u64 = 0x6368_726f_6e6f;

fn sample_subordinated_coordinate(
    model: &LevyModel,
    chron: &IdtSpec,
    j: usize,
    points: &[MultiIndex],
    count: usize,
    seed: u64,
    out: &mut FieldSample,
) -> Result<()> {
    let coord: Vec<f64> = points.iter().map(|p| p[j]).collect();
    let grid = merge_sorted(core::iter::once(0.0).chain(coord.iter().copied()));
    let idx: Vec<usize> = coord.iter().map(|&s| position(&grid, s)).collect();
    let clock: JointSample = IdtProcess::new(chron.clone())?.sample_at(
        &grid,
        count,
        rng::derive_seed(rng::derive_seed(seed, CHRONOMETER_LABEL), j as u64),
    )?;
    let mut r = rng::stream(rng::derive_seed(seed, j as u64), 0);
    let mut level = alloc::vec![0.0; grid.len()];
    for rep in 0..count {
        let tau = clock.row(rep);
        if tau[0] != 0.0 {
            return Err(Error::Contract(format!(
                "chronometer {j} does not start at 0 (replica {rep})"
            )));
        }
        if let Some(w) = tau.windows(2).position(|w| !(w[1] >= w[0])) {
            return Err(Error::Contract(format!(
                "chronometer {j} decreases from {} to {} (replica {rep})",
                tau[w],
                tau[w + 1]
            )));
        }
        for i in 1..grid.len() {
            level[i] = level[i - 1] + model.marginal(tau[i] - tau[i - 1])?.draw(&mut r);
        }
        for (v, &i) in out.row_mut(rep).iter_mut().zip(&idx) {
            *v += level[i];
        }
    }
    Ok(())
}

/// Composes a type-2 sum of Lévy processes with independent chronometers.
pub fn subordinate_type2(base: &FieldSpec, chronometers: Vec<IdtSpec>) -> Result<FieldSpec> {
    let FieldSpec::Type2SumLevy { models } = base else {
        return Err(Error::Precondition(format!(
            "subordination needs a type2_sum_levy base, got {}",
            base.name()
        )));
    };
    let spec = FieldSpec::Subordinated {
        models: models.clone(),
        chronometers,
    };
    spec.validate()?;
    Ok(spec)
}

/// Probe points in `ℝ₊ᴺ` used by the default checks.
pub fn default_points(n: usize) -> Vec<MultiIndex> {
    const VALUES: [f64; 4] = [0.5, 1.0, 1.5, 0.75];
    (0..2)
        .map(|i| {
            (0..n)
                .map(|j| VALUES[(i + 2 * j + i * j) % VALUES.len()])
                .collect()
        })
        .collect()
}

/// All pairs of the default points of [`default_points`] extended to ten points.
pub fn default_kernel_pairs(n: usize) -> Vec<(MultiIndex, MultiIndex)> {
    const VALUES: [f64; 5] = [0.3, 0.8, 1.0, 1.7, 2.5];
    let pts: Vec<MultiIndex> = (0..10)
        .map(|i| {
            (0..n)
                .map(|j| VALUES[(i + 3 * j) % VALUES.len()] + 0.1 * (i / 5) as f64)
                .collect()
        })
        .collect();
    pts.iter()
        .flat_map(|s| pts.iter().map(move |t| (s.clone(), t.clone())))
        .collect()
}

fn kernel_check(
    name: String,
    kernel: &dyn Fn(&[f64], &[f64]) -> f64,
    probes: &[(MultiIndex, MultiIndex)],
    scale: impl Fn(&[f64]) -> MultiIndex,
    factor: f64,
    tol: f64,
) -> Result<VerdictReport> {
    if probes.is_empty() {
        return Err(Error::Precondition("no probe pairs".into()));
    }
    let mut worst = (0.0, 0);
    for (i, (s, t)) in probes.iter().enumerate() {
        let v = (kernel(&scale(s), &scale(t)) - factor * kernel(s, t)).abs();
        if !(v <= worst.0) {
            worst = (if v.is_nan() { f64::INFINITY } else { v }, i);
        }
    }
    let (s, t) = &probes[worst.1];
    Ok(VerdictReport::new(name, worst.0, tol).with_meta("worst_pair", format!("{s:?},{t:?}")))
}

/// `max |κ(a.s, a.t) − δ(a) κ(s, t)|` over the probe pairs.
pub fn type1_cov_check(
    kernel: &dyn Fn(&[f64], &[f64]) -> f64,
    a: &[f64],
    probes: &[(MultiIndex, MultiIndex)],
    tol: f64,
) -> Result<VerdictReport> {
    if a.iter().any(|x| !(*x > 0.0)) {
        return Err(invalid("a", "scale must be positive in every coordinate"));
    }
    Ok(kernel_check(
        format!("type1_cov a={a:?}"),
        kernel,
        probes,
        |s| dot_scale(a, s),
        delta(a),
        tol,
    )?
    .with_meta("delta", delta(a)))
}

/// `max |κ(αs, αt) − α κ(s, t)|` over the probe pairs.
pub fn type2_cov_check(
    kernel: &dyn Fn(&[f64], &[f64]) -> f64,
    alpha: f64,
    probes: &[(MultiIndex, MultiIndex)],
    tol: f64,
) -> Result<VerdictReport> {
    if !(alpha > 0.0) {
        return Err(invalid("alpha", "scale must be positive"));
    }
    kernel_check(
        format!("type2_cov alpha={alpha}"),
        kernel,
        probes,
        |s| s.iter().map(|x| alpha * x).collect(),
        alpha,
        tol,
    )
}

fn power_check(
    name: String,
    spec: &FieldSpec,
    scale: &[f64],
    power: u32,
    points: &[MultiIndex],
    mc: McParams,
) -> Result<VerdictReport> {
    let scaled: Vec<MultiIndex> = points.iter().map(|p| dot_scale(scale, p)).collect();
    let a = sample_field(spec, &scaled, mc.count, rng::derive_seed(mc.seed, 1))?
        .law(format!("{}(n.s)", spec.name()));
    let b = sample_field(spec, points, mc.count, rng::derive_seed(mc.seed, 2))?
        .law(format!("{}(s)", spec.name()));
    let probes = default_probes(&a, &b);
    let mut r = ecf_power_check(&a, &b, power, &probes)?;
    r.name = name;
    Ok(r.with_meta("seed", mc.seed))
}

/// Joint CF of `X(n.s)` against the `n`-th power of that of `X(s)`, `n ∈ {2, 3}`.
pub fn type2_idt_check(
    spec: &FieldSpec,
    n: u32,
    points: &[MultiIndex],
    mc: McParams,
) -> Result<VerdictReport> {
    if !(2..=3).contains(&n) {
        return Err(invalid("n", format!("must be 2 or 3, got {n}")));
    }
    let scale = alloc::vec![f64::from(n); spec.dim()];
    power_check(
        format!("type2_idt {} n={n}", spec.name()),
        spec,
        &scale,
        n,
        points,
        mc,
    )
}

/// Joint CF of `X(n.s)` against the `δ(n)`-th power of that of `X(s)`, `nᵢ ∈ {1, 2, 3}`.
pub fn type1_idt_check(
    spec: &FieldSpec,
    n: &[u32],
    points: &[MultiIndex],
    mc: McParams,
) -> Result<VerdictReport> {
    if n.len() != spec.dim() || n.iter().any(|k| !(1..=3).contains(k)) {
        return Err(invalid(
            "n",
            format!("need {} components in {{1,2,3}}, got {n:?}", spec.dim()),
        ));
    }
    let scale: Vec<f64> = n.iter().map(|&k| f64::from(k)).collect();
    let power: u32 = n.iter().product();
    power_check(
        format!("type1_idt {} n={n:?}", spec.name()),
        spec,
        &scale,
        power,
        points,
        mc,
    )
}

/// Basis triplets `(A_{eʲ}, ν_{eʲ}, γ_{eʲ})`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TripletField {
    pub basis: Vec<LevyTriplet>,
}

impl TripletField {
    pub fn from_models(models: &[LevyModel]) -> Result<Self> {
        let basis = models
            .iter()
            .map(|m| m.validate().map(|()| m.triplet()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { basis })
    }

    pub fn validate(&self) -> Result<()> {
        if self.basis.is_empty() {
            return Err(invalid("basis", "empty"));
        }
        self.basis.iter().try_for_each(LevyTriplet::validate)
    }
}

/// `Σⱼ sⱼ · (A_{eʲ}, ν_{eʲ}, γ_{eʲ})`.
pub fn marginal_triplet(tf: &TripletField, s: &[f64]) -> Result<LevyTriplet> {
    tf.validate()?;
    if s.len() != tf.basis.len() {
        return Err(invalid(
            "s",
            format!(
                "{} coordinates for {} basis triplets",
                s.len(),
                tf.basis.len()
            ),
        ));
    }
    if s.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
        return Err(invalid("s", "coordinates must be nonnegative"));
    }
    Ok(tf
        .basis
        .iter()
        .zip(s)
        .filter(|(_, &x)| x > 0.0)
        .fold(LevyTriplet::zero(), |acc, (t, &x)| acc.plus(&t.scaled(x))))
}

/// Empirical CF of `X(s)` for a type-2 sum of Lévy processes against `exp ψ_s` from
/// [`marginal_triplet`].
pub fn type2_triplet_check(spec: &FieldSpec, s: &[f64], mc: McParams) -> Result<VerdictReport> {
    let FieldSpec::Type2SumLevy { models } = spec else {
        return Err(Error::Precondition(format!(
            "triplet check needs type2_sum_levy, got {}",
            spec.name()
        )));
    };
    let trip = marginal_triplet(&TripletField::from_models(models)?, s)?;
    let law = sample_field(spec, &[s.to_vec()], mc.count, mc.seed)?
        .law(format!("{}({s:?})", spec.name()));
    let probes = default_probes(&law, &law);
    Ok(
        ecf_vs_exact(&law, |th: &[f64]| trip.symbol(th[0]).exp(), &probes)?
            .with_meta("seed", mc.seed),
    )
}

/// A box `(lower, upper]` in `ℝ₊ᴺ`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Rect {
    pub lower: MultiIndex,
    pub upper: MultiIndex,
}

impl Rect {
    pub fn new(lower: MultiIndex, upper: MultiIndex) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(invalid(
                "rect",
                "corners must have the same positive dimension",
            ));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l <= u) || *l < 0.0) {
            return Err(invalid(
                "rect",
                format!("need 0 <= lower <= upper, got {lower:?}, {upper:?}"),
            ));
        }
        Ok(Self { lower, upper })
    }

    pub fn is_degenerate(&self) -> bool {
        self.lower.iter().zip(&self.upper).any(|(l, u)| l == u)
    }

    /// The `2ᴺ` corners with their inclusion–exclusion signs.
    pub fn corners(&self) -> Vec<(MultiIndex, f64)> {
        let n = self.lower.len();
        (0..1usize << n)
            .map(|mask| {
                let c = (0..n)
                    .map(|j| {
                        if mask >> j & 1 == 1 {
                            self.upper[j]
                        } else {
                            self.lower[j]
                        }
                    })
                    .collect();
                let lows = n - mask.count_ones() as usize;
                (c, if lows.is_multiple_of(2) { 1.0 } else { -1.0 })
            })
            .collect()
    }
}

/// Samples of `X(B)`, the alternating sum over the corners of `B`.
pub fn rect_increment(spec: &FieldSpec, rect: &Rect, count: usize, seed: u64) -> Result<Vec<f64>> {
    Ok(rect_increments(spec, core::slice::from_ref(rect), count, seed)?.remove(0))
}

/// Increments over several boxes from one realisation per replica.
pub fn rect_increments(
    spec: &FieldSpec,
    rects: &[Rect],
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    if count == 0 {
        return Err(Error::EmptyRequest);
    }
    let live: Vec<&Rect> = rects.iter().filter(|r| !r.is_degenerate()).collect();
    if live.is_empty() {
        return Ok(rects.iter().map(|_| alloc::vec![0.0; count]).collect());
    }
    let corners: Vec<Vec<(MultiIndex, f64)>> = live.iter().map(|r| r.corners()).collect();
    let points: Vec<MultiIndex> = corners.iter().flatten().map(|c| c.0.clone()).collect();
    let s = sample_field(spec, &points, count, seed)?;
    let mut live_out = Vec::with_capacity(live.len());
    let mut off = 0;
    for cs in &corners {
        live_out.push(
            (0..count)
                .map(|r| {
                    cs.iter()
                        .enumerate()
                        .map(|(i, c)| c.1 * s.row(r)[off + i])
                        .sum()
                })
                .collect(),
        );
        off += cs.len();
    }
    let mut it = live_out.into_iter();
    Ok(rects
        .iter()
        .map(|r| {
            if r.is_degenerate() {
                alloc::vec![0.0; count]
            } else {
                it.next().unwrap_or_default()
            }
        })
        .collect())
}

/// `4^{1/α} + 1 − 2·2^{1/α}`: the scale of `X((s,2s]×(u,2u])` relative to `X((0,s]×(0,u])`
/// for the product-stable field.
pub fn rect_scale_coefficient(alpha: f64) -> f64 {
    4f64.powf(1.0 / alpha) + 1.0 - 2.0 * 2f64.powf(1.0 / alpha)
}

/// Two-sample KS between the increments over `b` and over `b_tilde` (independent draws).
pub fn increment_stationarity_check(
    spec: &FieldSpec,
    b: &Rect,
    b_tilde: &Rect,
    mc: McParams,
) -> Result<VerdictReport> {
    let x = rect_increment(spec, b, mc.count, rng::derive_seed(mc.seed, 1))?;
    let y = rect_increment(spec, b_tilde, mc.count, rng::derive_seed(mc.seed, 2))?;
    let mut r = ks_two_sample(
        &EmpiricalLaw::scalar("X(B)", x, mc.seed),
        &EmpiricalLaw::scalar("X(B~)", y, mc.seed),
    )?;
    r.name = format!("increment_stationarity {}", spec.name());
    Ok(r)
}

/// Correlation of the increments over two boxes of one realisation against the null band.
pub fn rect_dependence_check(
    spec: &FieldSpec,
    b1: &Rect,
    b2: &Rect,
    mc: McParams,
) -> Result<VerdictReport> {
    let inc = rect_increments(spec, &[b1.clone(), b2.clone()], mc.count, mc.seed)?;
    Ok(independence_test(
        &format!("rect_increments {}", spec.name()),
        &inc[0],
        &inc[1],
    ))
}

/// `X(α s)` against `α^Q X(s)` for a diagonal operator exponent `Q` on the (scalar) output.
pub fn operator_scaling_check(
    spec: &FieldSpec,
    q: &[Vec<f64>],
    alpha: f64,
    points: &[MultiIndex],
    mc: McParams,
) -> Result<VerdictReport> {
    if q.is_empty() || q.iter().any(|row| row.len() != q.len()) {
        return Err(invalid("q", "operator exponent must be a square matrix"));
    }
    if q.iter()
        .enumerate()
        .any(|(i, row)| row.iter().enumerate().any(|(j, v)| i != j && *v != 0.0))
    {
        return Err(Error::Unsupported("non-diagonal operator exponents".into()));
    }
    if q.len() != 1 {
        return Err(Error::Unsupported(format!(
            "fields are scalar-valued; exponent has dimension {}",
            q.len()
        )));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid("alpha", "must be positive"));
    }
    let factor = alpha.powf(q[0][0]);
    let scaled: Vec<MultiIndex> = points
        .iter()
        .map(|p| p.iter().map(|x| alpha * x).collect())
        .collect();
    let a = sample_field(spec, &scaled, mc.count, rng::derive_seed(mc.seed, 1))?.law("X(αs)");
    let mut b = sample_field(spec, points, mc.count, rng::derive_seed(mc.seed, 2))?.law("α^Q X(s)");
    b.samples.iter_mut().for_each(|v| *v *= factor);
    let probes = default_probes(&a, &b);
    let mut r = ecf_distance(&a, &b, &probes)?;
    r.name = format!(
        "operator_scaling {} q={} alpha={alpha}",
        spec.name(),
        q[0][0]
    );
    Ok(r)
}

/// Closed-form one-point characteristic function of a field, where available.
pub fn field_cf(spec: &FieldSpec, s: &[f64], lam: f64) -> Option<Complex64> {
    match spec {
        FieldSpec::Type2SumLevy { models } => {
            let tf = TripletField::from_models(models).ok()?;
            Some(marginal_triplet(&tf, s).ok()?.symbol(lam).exp())
        }
        FieldSpec::Type1ProductStable { alpha, .. } => Some(Complex64::new(
            libm::exp(-(delta(s).powf(1.0 / alpha) * lam).abs().powf(*alpha)),
            0.0,
        )),
        _ => spec
            .gaussian_kernel()
            .map(|k| Complex64::new(libm::exp(-0.5 * lam * lam * k(s, s)), 0.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kernels_match_closed_forms() {
        let sheet = FieldSpec::BrownianSheetField { n: 2 }
            .gaussian_kernel()
            .unwrap();
        assert_eq!(sheet(&[1.0, 2.0], &[2.0, 1.0]), 1.0);
        let lbm = FieldSpec::LevyParamBm { m: 2 }.gaussian_kernel().unwrap();
        assert_relative_eq!(
            lbm(&[1.0, 0.0], &[0.0, 1.0]),
            (2.0 - 2f64.sqrt()) / 2.0,
            epsilon = 1e-15
        );
        let pairs = default_kernel_pairs(2);
        assert_eq!(pairs.len(), 100);
        assert!(
            type1_cov_check(&*sheet, &[2.0, 3.0], &pairs, 1e-12)
                .unwrap()
                .pass
        );
        assert!(
            !type1_cov_check(&*lbm, &[2.0, 1.0], &pairs, 1e-12)
                .unwrap()
                .pass
        );
        assert!(type2_cov_check(&*lbm, 2.0, &pairs, 1e-12).unwrap().pass);
        assert!(
            type1_cov_check(&|_: &[f64], _: &[f64]| 0.0, &[2.0, 2.0], &pairs, 0.0)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn marginal_triplet_is_linear() {
        let tf = TripletField::from_models(&[
            LevyModel::standard_brownian(),
            LevyModel::Poisson {
                rate: 1.0,
                jump: 1.0,
            },
        ])
        .unwrap();
        assert_eq!(
            marginal_triplet(&tf, &[0.0, 0.0]).unwrap(),
            LevyTriplet::zero()
        );
        assert_eq!(marginal_triplet(&tf, &[1.0, 0.0]).unwrap(), tf.basis[0]);
        let t = marginal_triplet(&tf, &[2.0, 3.0]).unwrap();
        assert_relative_eq!(t.gaussian_var, 2.0);
        let pois = LevyModel::Poisson {
            rate: 1.0,
            jump: 1.0,
        }
        .symbol(0.7);
        let bm = LevyModel::standard_brownian().symbol(0.7);
        assert_relative_eq!(
            t.symbol(0.7).re,
            (bm * 2.0 + pois * 3.0).re,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            t.symbol(0.7).im,
            (bm * 2.0 + pois * 3.0).im,
            epsilon = 1e-12
        );
    }

    #[test]
    fn rect_corners_and_degenerate_boxes() {
        let r = Rect::new(alloc::vec![1.0, 2.0], alloc::vec![3.0, 4.0]).unwrap();
        let c = r.corners();
        assert_eq!(c.len(), 4);
        assert_eq!(c.iter().map(|x| x.1).sum::<f64>(), 0.0);
        assert!(
            c.contains(&(alloc::vec![3.0, 4.0], 1.0)) && c.contains(&(alloc::vec![1.0, 2.0], 1.0))
        );
        let flat = Rect::new(alloc::vec![1.0, 2.0], alloc::vec![1.0, 4.0]).unwrap();
        let spec = FieldSpec::BrownianSheetField { n: 2 };
        assert!(rect_increment(&spec, &flat, 4, 0)
            .unwrap()
            .iter()
            .all(|v| *v == 0.0));
        assert!(Rect::new(alloc::vec![2.0], alloc::vec![1.0]).is_err());
    }

    #[test]
    fn coefficient_values() {
        assert_eq!(rect_scale_coefficient(1.0), 1.0);
        assert_eq!(rect_scale_coefficient(0.5), 9.0);
    }

    #[test]
    fn product_stable_is_one_variable_scaled() {
        let spec = FieldSpec::Type1ProductStable { alpha: 1.0, n: 2 };
        let s = sample_field(&spec, &[alloc::vec![1.0, 2.0], alloc::vec![2.0, 2.0]], 3, 9).unwrap();
        for r in 0..3 {
            assert_relative_eq!(s.row(r)[1], 2.0 * s.row(r)[0], epsilon = 1e-12);
        }
    }

    #[test]
    fn subordination_rejects_non_levy_base_and_decreasing_clock() {
        assert!(subordinate_type2(&FieldSpec::BrownianSheetField { n: 1 }, Vec::new()).is_err());
        let base = FieldSpec::Type2SumLevy {
            models: alloc::vec![LevyModel::standard_brownian()],
        };
        let bad = IdtSpec::Levy {
            model: LevyModel::standard_brownian(),
        };
        let spec = subordinate_type2(&base, alloc::vec![bad]).unwrap();
        let pts: Vec<MultiIndex> = (1..=8).map(|i| alloc::vec![i as f64]).collect();
        assert!(matches!(
            sample_field(&spec, &pts, 50, 1),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn operator_exponent_restrictions() {
        let spec = FieldSpec::LevyParamBm { m: 2 };
        let mc = McParams { count: 10, seed: 0 };
        let pts = default_points(2);
        let q = [alloc::vec![0.5, 0.1], alloc::vec![0.0, 0.5]];
        assert!(matches!(
            operator_scaling_check(&spec, &q, 2.0, &pts, mc),
            Err(Error::Unsupported(_))
        ));
        let q2 = [alloc::vec![0.5, 0.0], alloc::vec![0.0, 0.5]];
        assert!(matches!(
            operator_scaling_check(&spec, &q2, 2.0, &pts, mc),
            Err(Error::Unsupported(_))
        ));
    }
}
