//! Compactly supported measures on `[0, ∞)` and the mixed exponent and Lévy measure
//! they induce.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::levy::{Atom, JumpMeasureSpec, LevyModel, StableKind};
use crate::quad::adaptive_simpson;
use crate::sample::merge_sorted;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointMass {
    pub location: f64,
    pub mass: f64,
}

/// Constant density `level` on `[left, right)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DensityPiece {
    pub left: f64,
    pub right: f64,
    pub level: f64,
}

/// Atoms plus piecewise-constant density, supported in `[0, support_bound]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeasureHalfLine {
    #[cfg_attr(feature = "serde", serde(default))]
    pub atoms: Vec<PointMass>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub density_pieces: Vec<DensityPiece>,
    pub support_bound: f64,
}

impl MeasureHalfLine {
    pub fn dirac(a: f64) -> Self {
        Self {
            atoms: alloc::vec![PointMass {
                location: a,
                mass: 1.0
            }],
            density_pieces: Vec::new(),
            support_bound: a,
        }
    }

    pub fn atoms(points: &[(f64, f64)]) -> Self {
        Self {
            atoms: points
                .iter()
                .map(|&(location, mass)| PointMass { location, mass })
                .collect(),
            density_pieces: Vec::new(),
            support_bound: points.iter().map(|p| p.0).fold(0.0, f64::max),
        }
    }

    /// Lebesgue measure on `[l, r)`.
    pub fn lebesgue(l: f64, r: f64) -> Self {
        Self {
            atoms: Vec::new(),
            density_pieces: alloc::vec![DensityPiece {
                left: l,
                right: r,
                level: 1.0
            }],
            support_bound: r,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let h = self.support_bound;
        if !(h >= 0.0 && h.is_finite()) {
            return Err(invalid(
                "support_bound",
                format!("must be finite and nonnegative, got {h}"),
            ));
        }
        for a in &self.atoms {
            if !(a.location >= 0.0 && a.location <= h) {
                return Err(invalid(
                    "location",
                    format!("atom at {} outside [0, {h}]", a.location),
                ));
            }
            if !(a.mass > 0.0 && a.mass.is_finite()) {
                return Err(invalid(
                    "mass",
                    format!("atom mass must be positive, got {}", a.mass),
                ));
            }
        }
        for p in &self.density_pieces {
            if !(p.left >= 0.0 && p.left < p.right && p.right <= h) {
                return Err(invalid(
                    "density_pieces",
                    format!("[{}, {}) is not a subinterval of [0, {h}]", p.left, p.right),
                ));
            }
            if !(p.level >= 0.0 && p.level.is_finite()) {
                return Err(invalid(
                    "level",
                    format!("density level must be nonnegative, got {}", p.level),
                ));
            }
        }
        if self.atoms.is_empty() && self.density_pieces.iter().all(|p| p.level == 0.0) {
            return Err(invalid("mu", "measure is zero"));
        }
        Ok(())
    }

    /// `μ([h, ∞))`: left-continuous, nonincreasing, zero beyond the support.
    pub fn tail(&self, h: f64) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|a| a.location >= h)
            .map(|a| a.mass)
            .sum();
        let dens: f64 = self
            .density_pieces
            .iter()
            .map(|p| p.level * (p.right - p.left.max(h)).max(0.0))
            .sum();
        atoms + dens
    }

    /// `μ((h, ∞))`, the right limit of [`Self::tail`].
    pub fn tail_right(&self, h: f64) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|a| a.location > h)
            .map(|a| a.mass)
            .sum();
        atoms
            + self
                .density_pieces
                .iter()
                .map(|p| p.level * (p.right - p.left.max(h)).max(0.0))
                .sum::<f64>()
    }

    pub fn total_mass(&self) -> f64 {
        self.tail(0.0)
    }

    /// Breakpoints of the tail function: 0, atom locations, piece endpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        merge_sorted(
            [0.0]
                .into_iter()
                .chain(self.atoms.iter().map(|a| a.location))
                .chain(self.density_pieces.iter().flat_map(|p| [p.left, p.right])),
        )
    }

    /// Segments `(a, b, tail(a+), tail(b−))` on which the tail is linear.
    pub fn linear_segments(&self) -> Vec<(f64, f64, f64, f64)> {
        let bp = self.breakpoints();
        bp.windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| (w[0], w[1], self.tail_right(w[0]), self.tail(w[1])))
            .collect()
    }

    /// `∬ min(u, v) μ(du) μ(dv) = ∫ tail(h)² dh`, exact on each linear segment.
    pub fn min_kernel_mass(&self) -> f64 {
        self.linear_segments()
            .iter()
            .map(|&(a, b, ta, tb)| (b - a) * (ta * ta + ta * tb + tb * tb) / 3.0)
            .sum()
    }
}

/// `∫₀^u ψ(λv) dv` in closed form, or `None` when no closed form is implemented.
fn symbol_antiderivative(model: &LevyModel, lam: f64, u: f64) -> Option<Complex64> {
    let i = Complex64::i();
    match model {
        LevyModel::BrownianDrift { drift, variance } => Some(Complex64::new(
            -variance * lam * lam * u * u * u / 6.0,
            drift * lam * u * u / 2.0,
        )),
        LevyModel::Poisson { .. } | LevyModel::CompoundPoisson { .. } => {
            let atoms = model.triplet().jump_measure.finite_atoms()?;
            Some(
                atoms
                    .iter()
                    .map(|a| {
                        let w = lam * a.size;
                        if w == 0.0 {
                            Complex64::new(0.0, 0.0)
                        } else {
                            a.rate * (((i * w * u).exp() - 1.0) / (i * w) - u)
                        }
                    })
                    .sum(),
            )
        }
        LevyModel::StableStrict {
            alpha,
            kind: StableKind::Symmetric | StableKind::Subordinator,
            ..
        } => Some(model.symbol(lam) * u.powf(alpha + 1.0) / (alpha + 1.0)),
        LevyModel::Cauchy { .. } => Some(model.symbol(lam) * u * u / 2.0),
        LevyModel::Gamma { .. } => None,
    }
}

/// `ψ^μ(λ) = ∫₀^∞ ψ(λ·μ([h, ∞))) dh`: exact per linear segment of the tail when the
/// symbol has a closed-form antiderivative, adaptive quadrature otherwise.
pub fn exponent_mu(model: &LevyModel, mu: &MeasureHalfLine, lam: f64) -> Result<Complex64> {
    model.validate()?;
    mu.validate()?;
    let mut total = Complex64::new(0.0, 0.0);
    for (a, b, ta, tb) in mu.linear_segments() {
        let len = b - a;
        if ta == tb {
            total += model.symbol(lam * ta) * len;
            continue;
        }
        let slope = (ta - tb) / len;
        total += match (
            symbol_antiderivative(model, lam, ta),
            symbol_antiderivative(model, lam, tb),
        ) {
            (Some(fa), Some(fb)) => (fa - fb) / slope,
            _ => adaptive_simpson(|h| model.symbol(lam * (ta - slope * (h - a))), a, b, 1e-13),
        };
    }
    Ok(total)
}

/// `∫ ν^μ(dy) f(y) = ∫₀^∞ dh ∫ ν(dx) f(μ([h, ∞))·x)` for a finite-atom `ν`.
pub fn levy_measure_mu(
    nu: &JumpMeasureSpec,
    mu: &MeasureHalfLine,
    f: &dyn Fn(f64) -> f64,
) -> Result<f64> {
    nu.validate()?;
    mu.validate()?;
    let atoms: Vec<Atom> = match nu {
        JumpMeasureSpec::None
        | JumpMeasureSpec::FiniteAtoms { .. }
        | JumpMeasureSpec::Sum { .. } => nu.finite_atoms().ok_or_else(|| {
            Error::Unsupported("pushforward implemented for finite-atom measures only".into())
        })?,
        _ => {
            return Err(Error::Unsupported(
                "pushforward implemented for finite-atom measures only".into(),
            ))
        }
    };
    let f0 = f(0.0);
    if f0 != 0.0 {
        return Err(Error::Contract(format!(
            "test function must vanish at 0, f(0) = {f0}"
        )));
    }
    let mut total = 0.0;
    for (a, b, ta, tb) in mu.linear_segments() {
        for at in &atoms {
            total += if ta == tb {
                (b - a) * at.rate * f(ta * at.size)
            } else {
                let slope = (ta - tb) / (b - a);
                at.rate * adaptive_simpson(|h| f((ta - slope * (h - a)) * at.size), a, b, 1e-14)
            };
        }
    }
    Ok(total)
}
