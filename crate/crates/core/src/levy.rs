//! One-parameter Lévy laws: generating triplets, symbols and exact samplers.
//!
//! Jumps are compensated on `|x| < 1` throughout, so a triplet `(b, σ², ν)` has symbol
//! `ψ(λ) = ibλ − σ²λ²/2 + ∫ (e^{iλx} − 1 − iλx·1{|x|<1}) ν(dx)`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{
    Distribution, Exp1, Gamma as GammaDist, Open01, Poisson as PoissonDist, StandardNormal,
};

use crate::error::{invalid, Error, Result};
use crate::rng::{self, CellStreams, StreamRng};
use crate::sample::{check_path_grid, JointSample, PathSample};
#[allow(unused_imports)]
use num_traits::Float;

/// A point mass of a Lévy measure: jump `size` arriving at `rate`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Atom {
    pub size: f64,
    pub rate: f64,
}

/// One outcome of a compound-Poisson jump law.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JumpAtom {
    pub size: f64,
    pub prob: f64,
}

/// Lévy measures with closed-form compensated integrals.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum JumpMeasureSpec {
    None,
    FiniteAtoms {
        atoms: Vec<Atom>,
    },
    /// Lévy measure of a strictly stable law with symbol
    /// `−scale^α |λ|^α (1 − i·skew·tan(πα/2)·sgn λ)` (pure jump, no drift).
    StableTail {
        alpha: f64,
        scale: f64,
        skew: f64,
    },
    /// `shape · e^{−rate x} / x` on `x > 0`.
    GammaTail {
        shape: f64,
        rate: f64,
    },
    Sum {
        parts: Vec<JumpMeasureSpec>,
    },
}

impl JumpMeasureSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::None => Ok(()),
            Self::FiniteAtoms { atoms } => {
                for a in atoms {
                    if !(a.rate > 0.0 && a.rate.is_finite()) {
                        return Err(invalid(
                            "rate",
                            format!("atom rate must be positive, got {}", a.rate),
                        ));
                    }
                    if a.size == 0.0 || !a.size.is_finite() {
                        return Err(invalid(
                            "size",
                            format!("atom size must be nonzero, got {}", a.size),
                        ));
                    }
                }
                Ok(())
            }
            Self::StableTail { alpha, scale, skew } => {
                if !(*alpha > 0.0 && *alpha < 2.0) {
                    return Err(invalid(
                        "alpha",
                        format!("stable tail needs α in (0,2), got {alpha}"),
                    ));
                }
                if !(*scale > 0.0 && scale.is_finite()) {
                    return Err(invalid("scale", format!("must be positive, got {scale}")));
                }
                if !(-1.0..=1.0).contains(skew) {
                    return Err(invalid("skew", format!("must lie in [-1,1], got {skew}")));
                }
                if *alpha == 1.0 && *skew != 0.0 {
                    return Err(Error::Unsupported(
                        "skewed 1-stable laws are not strictly stable".into(),
                    ));
                }
                Ok(())
            }
            Self::GammaTail { shape, rate } => {
                if !(*shape > 0.0 && *rate > 0.0) {
                    return Err(invalid("shape", "gamma tail needs positive shape and rate"));
                }
                Ok(())
            }
            Self::Sum { parts } => parts.iter().try_for_each(Self::validate),
        }
    }

    /// Densities `(c₊, c₋)` of a stable tail, `ν(dx) = c± |x|^{−1−α} dx` on `±x > 0`.
    pub fn stable_densities(alpha: f64, scale: f64, skew: f64) -> (f64, f64) {
        let total = if alpha == 1.0 {
            2.0 * scale / PI
        } else {
            alpha * scale.powf(alpha) / (libm::tgamma(1.0 - alpha) * (FRAC_PI_2 * alpha).cos())
        };
        (0.5 * (1.0 + skew) * total, 0.5 * (1.0 - skew) * total)
    }

    /// `∫ (e^{iλx} − 1 − iλx·1{|x|<1}) ν(dx)`.
    pub fn compensated_integral(&self, lam: f64) -> Complex64 {
        let i = Complex64::i();
        match self {
            Self::None => Complex64::new(0.0, 0.0),
            Self::FiniteAtoms { atoms } => atoms
                .iter()
                .map(|a| {
                    let comp = if a.size.abs() < 1.0 {
                        a.size * lam
                    } else {
                        0.0
                    };
                    a.rate * ((i * lam * a.size).exp() - 1.0 - i * comp)
                })
                .sum(),
            Self::StableTail { alpha, scale, skew } => {
                if lam == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                if *alpha == 1.0 {
                    return Complex64::new(-scale * lam.abs(), 0.0);
                }
                let (cp, cm) = Self::stable_densities(*alpha, *scale, *skew);
                let mag = (scale * lam.abs()).powf(*alpha);
                let phi =
                    -mag * Complex64::new(1.0, -skew * (FRAC_PI_2 * alpha).tan() * lam.signum());
                phi - i * lam * (cp - cm) / (1.0 - alpha)
            }
            Self::GammaTail { shape, rate } => {
                let b = shape * (1.0 - (-rate).exp()) / rate;
                -*shape * (Complex64::new(1.0, -lam / rate)).ln() - i * lam * b
            }
            Self::Sum { parts } => parts.iter().map(|p| p.compensated_integral(lam)).sum(),
        }
    }

    /// The measure `c·ν`.
    pub fn scaled(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::None;
        }
        match self {
            Self::None => Self::None,
            Self::FiniteAtoms { atoms } => Self::FiniteAtoms {
                atoms: atoms
                    .iter()
                    .map(|a| Atom {
                        size: a.size,
                        rate: a.rate * c,
                    })
                    .collect(),
            },
            Self::StableTail { alpha, scale, skew } => Self::StableTail {
                alpha: *alpha,
                scale: scale * c.powf(1.0 / alpha),
                skew: *skew,
            },
            Self::GammaTail { shape, rate } => Self::GammaTail {
                shape: shape * c,
                rate: *rate,
            },
            Self::Sum { parts } => Self::Sum {
                parts: parts.iter().map(|p| p.scaled(c)).collect(),
            },
        }
    }

    /// The measure `ν + other`, merging atom lists where possible.
    pub fn plus(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::None, x) | (x, Self::None) => x.clone(),
            (Self::FiniteAtoms { atoms: a }, Self::FiniteAtoms { atoms: b }) => {
                let mut atoms = a.clone();
                for x in b {
                    match atoms.iter_mut().find(|y| y.size == x.size) {
                        Some(y) => y.rate += x.rate,
                        None => atoms.push(*x),
                    }
                }
                Self::FiniteAtoms { atoms }
            }
            (Self::Sum { parts }, x) | (x, Self::Sum { parts }) => {
                let mut parts = parts.clone();
                parts.push(x.clone());
                Self::Sum { parts }
            }
            (a, b) => Self::Sum {
                parts: alloc::vec![a.clone(), b.clone()],
            },
        }
    }

    /// The atoms, when the measure is finite and atomic.
    pub fn finite_atoms(&self) -> Option<Vec<Atom>> {
        match self {
            Self::None => Some(Vec::new()),
            Self::FiniteAtoms { atoms } => Some(atoms.clone()),
            Self::Sum { parts } => {
                let mut out = Vec::new();
                for p in parts {
                    out.extend(p.finite_atoms()?);
                }
                Some(out)
            }
            _ => None,
        }
    }
}

/// A generating triplet `(b, σ², ν)` under the `|x| < 1` compensation convention.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LevyTriplet {
    pub drift_b: f64,
    pub gaussian_var: f64,
    pub jump_measure: JumpMeasureSpec,
}

impl LevyTriplet {
    pub fn zero() -> Self {
        Self {
            drift_b: 0.0,
            gaussian_var: 0.0,
            jump_measure: JumpMeasureSpec::None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gaussian_var >= 0.0 && self.gaussian_var.is_finite()) {
            return Err(invalid(
                "gaussian_var",
                format!("must be nonnegative, got {}", self.gaussian_var),
            ));
        }
        if !self.drift_b.is_finite() {
            return Err(invalid("drift_b", "must be finite"));
        }
        self.jump_measure.validate()
    }

    pub fn symbol(&self, lam: f64) -> Complex64 {
        Complex64::new(-0.5 * self.gaussian_var * lam * lam, self.drift_b * lam)
            + self.jump_measure.compensated_integral(lam)
    }

    /// Triplet of the law at time `c`: every component scales linearly.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            drift_b: self.drift_b * c,
            gaussian_var: self.gaussian_var * c,
            jump_measure: self.jump_measure.scaled(c),
        }
    }

    /// Triplet of the convolution of the two laws.
    pub fn plus(&self, other: &Self) -> Self {
        Self {
            drift_b: self.drift_b + other.drift_b,
            gaussian_var: self.gaussian_var + other.gaussian_var,
            jump_measure: self.jump_measure.plus(&other.jump_measure),
        }
    }
}

/// Sign structure of a strictly stable family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StableKind {
    #[default]
    Symmetric,
    /// One-sided, Laplace transform `e^{−t (scale·z)^α}`; requires `α < 1`.
    Subordinator,
}

/// A one-parameter Lévy law given by family parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum LevyModel {
    BrownianDrift {
        drift: f64,
        variance: f64,
    },
    Poisson {
        rate: f64,
        jump: f64,
    },
    CompoundPoisson {
        rate: f64,
        jumps: Vec<JumpAtom>,
    },
    Gamma {
        shape: f64,
        rate: f64,
    },
    /// Symmetric: `ψ(λ) = −(scale|λ|)^α`.
    StableStrict {
        alpha: f64,
        scale: f64,
        #[cfg_attr(feature = "serde", serde(default))]
        kind: StableKind,
    },
    /// `ψ(λ) = −scale·|λ|`.
    Cauchy {
        scale: f64,
    },
}

impl LevyModel {
    pub fn standard_brownian() -> Self {
        Self::BrownianDrift {
            drift: 0.0,
            variance: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(
                    name,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        };
        match self {
            Self::BrownianDrift { drift, variance } => {
                if !drift.is_finite() {
                    return Err(invalid("drift", "must be finite"));
                }
                if !(*variance >= 0.0 && variance.is_finite()) {
                    return Err(invalid(
                        "variance",
                        format!("must be nonnegative, got {variance}"),
                    ));
                }
                Ok(())
            }
            Self::Poisson { rate, jump } => {
                positive("rate", *rate)?;
                if *jump == 0.0 || !jump.is_finite() {
                    return Err(invalid("jump", "must be nonzero and finite"));
                }
                Ok(())
            }
            Self::CompoundPoisson { rate, jumps } => {
                positive("rate", *rate)?;
                if jumps.is_empty() {
                    return Err(invalid("jumps", "jump law must have at least one atom"));
                }
                for j in jumps {
                    positive("prob", j.prob)?;
                    if j.size == 0.0 || !j.size.is_finite() {
                        return Err(invalid("size", "jump sizes must be nonzero and finite"));
                    }
                }
                let total: f64 = jumps.iter().map(|j| j.prob).sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(invalid(
                        "prob",
                        format!("jump probabilities sum to {total}, not 1"),
                    ));
                }
                Ok(())
            }
            Self::Gamma { shape, rate } => {
                positive("shape", *shape)?;
                positive("rate", *rate)
            }
            Self::StableStrict { alpha, scale, kind } => {
                if *alpha == 2.0 {
                    return Err(invalid("alpha", "α = 2 is Gaussian; use brownian_drift"));
                }
                if !(*alpha > 0.0 && *alpha < 2.0) {
                    return Err(invalid("alpha", format!("must lie in (0,2), got {alpha}")));
                }
                if *kind == StableKind::Subordinator && *alpha >= 1.0 {
                    return Err(invalid(
                        "alpha",
                        format!("a stable subordinator needs α < 1, got {alpha}"),
                    ));
                }
                positive("scale", *scale)
            }
            Self::Cauchy { scale } => positive("scale", *scale),
        }
    }

    /// Lévy symbol `ψ` with `E e^{iλL₁} = e^{ψ(λ)}`.
    pub fn symbol(&self, lam: f64) -> Complex64 {
        let i = Complex64::i();
        match self {
            Self::BrownianDrift { drift, variance } => {
                Complex64::new(-0.5 * variance * lam * lam, drift * lam)
            }
            Self::Poisson { rate, jump } => *rate * ((i * lam * jump).exp() - 1.0),
            Self::CompoundPoisson { rate, jumps } => jumps
                .iter()
                .map(|j| *rate * j.prob * ((i * lam * j.size).exp() - 1.0))
                .sum(),
            Self::Gamma { shape, rate } => -*shape * Complex64::new(1.0, -lam / rate).ln(),
            Self::StableStrict { alpha, scale, kind } => {
                if lam == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let mag = (scale * lam.abs()).powf(*alpha);
                match kind {
                    StableKind::Symmetric => Complex64::new(-mag, 0.0),
                    StableKind::Subordinator => {
                        -mag * Complex64::from_polar(1.0, -FRAC_PI_2 * alpha * lam.signum())
                    }
                }
            }
            Self::Cauchy { scale } => Complex64::new(-scale * lam.abs(), 0.0),
        }
    }

    /// Generating triplet under the `|x| < 1` compensation convention.
    pub fn triplet(&self) -> LevyTriplet {
        let small = |x: f64| if x.abs() < 1.0 { x } else { 0.0 };
        match self {
            Self::BrownianDrift { drift, variance } => LevyTriplet {
                drift_b: *drift,
                gaussian_var: *variance,
                jump_measure: JumpMeasureSpec::None,
            },
            Self::Poisson { rate, jump } => LevyTriplet {
                drift_b: rate * small(*jump),
                gaussian_var: 0.0,
                jump_measure: JumpMeasureSpec::FiniteAtoms {
                    atoms: alloc::vec![Atom {
                        size: *jump,
                        rate: *rate
                    }],
                },
            },
            Self::CompoundPoisson { rate, jumps } => LevyTriplet {
                drift_b: jumps.iter().map(|j| rate * j.prob * small(j.size)).sum(),
                gaussian_var: 0.0,
                jump_measure: JumpMeasureSpec::FiniteAtoms {
                    atoms: jumps
                        .iter()
                        .map(|j| Atom {
                            size: j.size,
                            rate: rate * j.prob,
                        })
                        .collect(),
                },
            },
            Self::Gamma { shape, rate } => LevyTriplet {
                drift_b: shape * (1.0 - (-rate).exp()) / rate,
                gaussian_var: 0.0,
                jump_measure: JumpMeasureSpec::GammaTail {
                    shape: *shape,
                    rate: *rate,
                },
            },
            Self::StableStrict {
                alpha,
                scale,
                kind: StableKind::Symmetric,
            } => LevyTriplet {
                drift_b: 0.0,
                gaussian_var: 0.0,
                jump_measure: JumpMeasureSpec::StableTail {
                    alpha: *alpha,
                    scale: *scale,
                    skew: 0.0,
                },
            },
            Self::StableStrict {
                alpha,
                scale,
                kind: StableKind::Subordinator,
            } => {
                let st_scale = scale * (FRAC_PI_2 * alpha).cos().powf(1.0 / alpha);
                let (cp, _) = JumpMeasureSpec::stable_densities(*alpha, st_scale, 1.0);
                LevyTriplet {
                    drift_b: cp / (1.0 - alpha),
                    gaussian_var: 0.0,
                    jump_measure: JumpMeasureSpec::StableTail {
                        alpha: *alpha,
                        scale: st_scale,
                        skew: 1.0,
                    },
                }
            }
            Self::Cauchy { scale } => LevyTriplet {
                drift_b: 0.0,
                gaussian_var: 0.0,
                jump_measure: JumpMeasureSpec::StableTail {
                    alpha: 1.0,
                    scale: *scale,
                    skew: 0.0,
                },
            },
        }
    }

    /// `E L₁`, when finite.
    pub fn mean(&self) -> Option<f64> {
        match self {
            Self::BrownianDrift { drift, .. } => Some(*drift),
            Self::Poisson { rate, jump } => Some(rate * jump),
            Self::CompoundPoisson { rate, jumps } => {
                Some(rate * jumps.iter().map(|j| j.prob * j.size).sum::<f64>())
            }
            Self::Gamma { shape, rate } => Some(shape / rate),
            Self::StableStrict {
                alpha,
                kind: StableKind::Symmetric,
                ..
            } if *alpha > 1.0 => Some(0.0),
            Self::StableStrict { .. } | Self::Cauchy { .. } => None,
        }
    }

    /// Whether `E |L₁| < ∞`.
    pub fn has_finite_mean(&self) -> bool {
        self.mean().is_some()
    }

    /// Whether paths are almost surely nondecreasing.
    pub fn is_subordinator(&self) -> bool {
        match self {
            Self::BrownianDrift { drift, variance } => *variance == 0.0 && *drift >= 0.0,
            Self::Poisson { jump, .. } => *jump > 0.0,
            Self::CompoundPoisson { jumps, .. } => jumps.iter().all(|j| j.size > 0.0),
            Self::Gamma { .. } => true,
            Self::StableStrict { kind, .. } => *kind == StableKind::Subordinator,
            Self::Cauchy { .. } => false,
        }
    }

    /// The model run at rate `c`, i.e. with symbol `c·ψ`.
    pub fn time_scaled(&self, c: f64) -> Self {
        match self {
            Self::BrownianDrift { drift, variance } => Self::BrownianDrift {
                drift: drift * c,
                variance: variance * c,
            },
            Self::Poisson { rate, jump } => Self::Poisson {
                rate: rate * c,
                jump: *jump,
            },
            Self::CompoundPoisson { rate, jumps } => Self::CompoundPoisson {
                rate: rate * c,
                jumps: jumps.clone(),
            },
            Self::Gamma { shape, rate } => Self::Gamma {
                shape: shape * c,
                rate: *rate,
            },
            Self::StableStrict { alpha, scale, kind } => Self::StableStrict {
                alpha: *alpha,
                scale: scale * c.powf(1.0 / alpha),
                kind: *kind,
            },
            Self::Cauchy { scale } => Self::Cauchy { scale: scale * c },
        }
    }

    /// Exact sampler for the law of `L_t`.
    pub fn marginal(&self, t: f64) -> Result<Marginal> {
        self.validate()?;
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!(
                "time must be nonnegative and finite, got {t}"
            )));
        }
        if t == 0.0 {
            return Ok(Marginal::Zero);
        }
        let poisson = |lambda: f64| {
            PoissonDist::new(lambda)
                .map_err(|e| invalid("rate", format!("{e:?} for intensity {lambda}")))
        };
        Ok(match self {
            Self::BrownianDrift { drift, variance } => Marginal::Normal {
                mean: drift * t,
                sd: (variance * t).sqrt(),
            },
            Self::Poisson { rate, jump } => {
                Marginal::Atoms(alloc::vec![(*jump, poisson(rate * t)?)])
            }
            Self::CompoundPoisson { rate, jumps } => Marginal::Atoms(
                jumps
                    .iter()
                    .map(|j| Ok((j.size, poisson(rate * j.prob * t)?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Self::Gamma { shape, rate } => Marginal::Gamma(
                GammaDist::new(shape * t, 1.0 / rate)
                    .map_err(|e| invalid("shape", format!("{e:?}")))?,
            ),
            Self::StableStrict {
                alpha,
                scale,
                kind: StableKind::Symmetric,
            } => Marginal::SymmetricStable {
                alpha: *alpha,
                scale: scale * t.powf(1.0 / alpha),
            },
            Self::StableStrict {
                alpha,
                scale,
                kind: StableKind::Subordinator,
            } => Marginal::PositiveStable {
                alpha: *alpha,
                scale: scale * t.powf(1.0 / alpha),
            },
            Self::Cauchy { scale } => Marginal::SymmetricStable {
                alpha: 1.0,
                scale: scale * t,
            },
        })
    }
}

/// A prepared exact sampler for one marginal law.
#[derive(Debug, Clone)]
pub enum Marginal {
    Zero,
    Normal { mean: f64, sd: f64 },
    Atoms(Vec<(f64, PoissonDist<f64>)>),
    Gamma(GammaDist<f64>),
    SymmetricStable { alpha: f64, scale: f64 },
    PositiveStable { alpha: f64, scale: f64 },
}

impl Marginal {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Normal { mean, sd } => {
                let z: f64 = rng.sample(StandardNormal);
                mean + sd * z
            }
            Self::Atoms(parts) => parts.iter().map(|(x, p)| x * p.sample(rng)).sum(),
            Self::Gamma(g) => g.sample(rng),
            Self::SymmetricStable { alpha, scale } => scale * symmetric_stable(*alpha, rng),
            Self::PositiveStable { alpha, scale } => scale * positive_stable(*alpha, rng),
        }
    }
}

/// Chambers–Mallows–Stuck draw with `E e^{iλX} = e^{−|λ|^α}`.
pub fn symmetric_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.sample::<f64, _>(Open01);
    let u = PI * (u - 0.5);
    if alpha == 1.0 {
        return u.tan();
    }
    let w: f64 = rng.sample(Exp1);
    (alpha * u).sin() / u.cos().powf(1.0 / alpha)
        * (((1.0 - alpha) * u).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Kanter's draw of a positive stable variable with `E e^{−zS} = e^{−z^α}`, `0 < α < 1`.
pub fn positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.sample::<f64, _>(Open01);
    let u = PI * u;
    let e: f64 = rng.sample(Exp1);
    (alpha * u).sin() / u.sin().powf(1.0 / alpha)
        * (((1.0 - alpha) * u).sin() / e).powf((1.0 - alpha) / alpha)
}

/// Lévy symbol of `model` at `lam`.
pub fn levy_symbol(model: &LevyModel, lam: f64) -> Complex64 {
    model.symbol(lam)
}

/// Generating triplet of `model`.
pub fn triplet_of(model: &LevyModel) -> LevyTriplet {
    model.triplet()
}

/// `count` i.i.d. draws of `L_t`. Uses stream 0 of `seed`, so the draws coincide
/// with the terminal values of [`simulate_paths`] on the grid `{0, t}`.
pub fn sample_marginal(model: &LevyModel, t: f64, count: usize, seed: u64) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::EmptyRequest);
    }
    let m = model.marginal(t)?;
    let mut r = rng::stream(seed, 0);
    Ok((0..count).map(|_| m.draw(&mut r)).collect())
}

/// One path on `times`: independent increments with law `L_{Δt}`, cumulated.
pub fn simulate_path(model: &LevyModel, times: &[f64], seed: u64) -> Result<PathSample> {
    let batch = simulate_paths(model, times, 1, seed)?;
    Ok(PathSample {
        times: batch.times,
        values: batch.values,
        seed,
    })
}

/// `count` independent paths on `times`. The increment over cell `i` of replica `r`
/// is the `r`-th draw of stream `i`.
pub fn simulate_paths(
    model: &LevyModel,
    times: &[f64],
    count: usize,
    seed: u64,
) -> Result<JointSample> {
    let mut out = JointSample::zeros(times, count, seed);
    for_each_path(model, times, count, seed, |r, path| {
        out.row_mut(r).copy_from_slice(path)
    })?;
    Ok(out)
}

/// Streams the paths of [`simulate_paths`] to `visit` one replica at a time.
pub fn for_each_path(
    model: &LevyModel,
    times: &[f64],
    count: usize,
    seed: u64,
    mut visit: impl FnMut(usize, &[f64]),
) -> Result<()> {
    if count == 0 {
        return Err(Error::EmptyRequest);
    }
    check_path_grid(times)?;
    let laws = times
        .windows(2)
        .map(|w| model.marginal(w[1] - w[0]))
        .collect::<Result<Vec<_>>>()?;
    let mut streams = CellStreams::new(seed, laws.len());
    let mut path = alloc::vec![0.0; times.len()];
    for r in 0..count {
        let mut acc = 0.0;
        for (i, law) in laws.iter().enumerate() {
            acc += law.draw(streams.cell(i));
            path[i + 1] = acc;
        }
        visit(r, &path);
    }
    Ok(())
}

/// `Σᵢ wᵢ (L_{tᵢ₊₁} − L_{tᵢ})` for each replica, with the increments of [`for_each_path`]
/// (same streams, same draws) visited cell by cell. Agrees with the path-based sum up to rounding.
pub fn weighted_increments(
    model: &LevyModel,
    times: &[f64],
    weights: &[f64],
    count: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::EmptyRequest);
    }
    check_path_grid(times)?;
    if weights.len() != times.len() - 1 {
        return Err(invalid(
            "weights",
            format!(
                "need one weight per cell ({}), got {}",
                times.len() - 1,
                weights.len()
            ),
        ));
    }
    let laws = times
        .windows(2)
        .map(|w| model.marginal(w[1] - w[0]))
        .collect::<Result<Vec<_>>>()?;
    Ok(weighted_cell_sums(&laws, 0.., weights, count, seed))
}

/// `Σᵢ wᵢ Δᵢ` per replica, `Δᵢ` being the `r`-th draw of `laws[i]` from stream `indices[i]`.
pub(crate) fn weighted_cell_sums(
    laws: &[Marginal],
    indices: impl IntoIterator<Item = u64>,
    weights: &[f64],
    count: usize,
    seed: u64,
) -> Vec<f64> {
    let mut out = alloc::vec![0.0; count];
    for ((law, index), &w) in laws.iter().zip(indices).zip(weights) {
        if w == 0.0 {
            continue;
        }
        let mut r = rng::stream(seed, index);
        for o in &mut out {
            *o += w * law.draw(&mut r);
        }
    }
    out
}

/// Draws of `L` at arbitrary sorted times (not necessarily starting at 0), one path per replica.
pub fn sample_at_times(
    model: &LevyModel,
    times: &[f64],
    count: usize,
    seed: u64,
) -> Result<JointSample> {
    crate::sample::check_times(times)?;
    let shift = usize::from(times[0] > 0.0);
    let mut grid = Vec::with_capacity(times.len() + shift);
    if shift == 1 {
        grid.push(0.0);
    }
    grid.extend_from_slice(times);
    let full = simulate_paths(model, &grid, count, seed)?;
    let mut out = JointSample::zeros(times, count, seed);
    for r in 0..count {
        out.row_mut(r).copy_from_slice(&full.row(r)[shift..]);
    }
    Ok(out)
}

/// A fresh stream for ad-hoc per-increment draws.
pub fn increment_stream(seed: u64, index: u64) -> StreamRng {
    rng::stream(seed, index)
}
