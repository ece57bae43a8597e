//! Both sides of the weak Itô formula for Lévy models with finitely many jump sizes.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::constructions::MarginalSampler;
use crate::error::{invalid, Error, Result};
use crate::levy::{sample_marginal, Atom, LevyModel};
use crate::quad::simpson_weights;
use crate::report::VerdictReport;
use crate::rng;
use crate::verify::{McParams, BAND_SIGMAS};
#[allow(unused_imports)]
use num_traits::Float;

/// Number of Simpson intervals in time.
pub const TIME_INTERVALS: usize = 16;

/// A `C²` test function with closed-form derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum TestFunction {
    /// `x^k`.
    Monomial { k: u32 },
    /// `cos(ωx)`.
    Cosine { omega: f64 },
}

impl TestFunction {
    pub fn label(&self) -> String {
        match self {
            Self::Monomial { k } => format!("x^{k}"),
            Self::Cosine { omega } => format!("cos({omega}x)"),
        }
    }

    pub fn f(&self, x: f64) -> f64 {
        match *self {
            Self::Monomial { k } => x.powi(k as i32),
            Self::Cosine { omega } => libm::cos(omega * x),
        }
    }

    pub fn d1(&self, x: f64) -> f64 {
        match *self {
            Self::Monomial { k: 0 } => 0.0,
            Self::Monomial { k } => k as f64 * x.powi(k as i32 - 1),
            Self::Cosine { omega } => -omega * libm::sin(omega * x),
        }
    }

    pub fn d2(&self, x: f64) -> f64 {
        match *self {
            Self::Monomial { k: 0 | 1 } => 0.0,
            Self::Monomial { k } => (k * (k - 1)) as f64 * x.powi(k as i32 - 2),
            Self::Cosine { omega } => -omega * omega * libm::cos(omega * x),
        }
    }
}

/// Estimates of both sides with their standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct ItoSides {
    /// `E f(X_t)`.
    pub lhs: f64,
    pub lhs_se: f64,
    /// Triplet form with mean drift and fully compensated jumps.
    pub rhs: f64,
    pub rhs_se: f64,
    /// `|S₁₆ − S₈|`, the time-quadrature error proxy.
    pub quad_err: f64,
    /// The form that differentiates `E X_s` and `Var X_s`.
    pub headline: f64,
    pub headline_se: f64,
}

impl ItoSides {
    pub fn band(&self) -> f64 {
        BAND_SIGMAS * (self.lhs_se + self.rhs_se) + self.quad_err
    }

    pub fn headline_band(&self) -> f64 {
        BAND_SIGMAS * (self.lhs_se + self.headline_se) + self.quad_err
    }

    pub fn headline_gap(&self) -> f64 {
        self.headline - self.rhs
    }
}

struct Generator {
    drift: f64,
    sigma2: f64,
    atoms: Vec<Atom>,
    jump_var: f64,
}

impl Generator {
    fn of(model: &LevyModel) -> Result<Self> {
        model.validate()?;
        let drift = model
            .mean()
            .ok_or_else(|| Error::Precondition(format!("{model:?} has no finite mean")))?;
        let trip = model.triplet();
        let atoms = trip.jump_measure.finite_atoms().ok_or_else(|| {
            Error::Unsupported(format!(
                "{model:?} has infinitely many jump sizes; only finite atoms are supported"
            ))
        })?;
        let jump_var = atoms.iter().map(|a| a.rate * a.size * a.size).sum();
        Ok(Self {
            drift,
            sigma2: trip.gaussian_var,
            atoms,
            jump_var,
        })
    }

    /// Integrand of the triplet form and the headline correction at `x`.
    fn apply(&self, f: &TestFunction, x: f64) -> (f64, f64) {
        let (d1, d2) = (f.d1(x), f.d2(x));
        let jumps: f64 = self
            .atoms
            .iter()
            .map(|a| a.rate * (f.f(x + a.size) - f.f(x) - a.size * d1))
            .sum();
        (
            self.drift * d1 + 0.5 * self.sigma2 * d2 + jumps,
            0.5 * d2 * self.jump_var,
        )
    }
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, (v / n).sqrt())
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{what} is not finite on the sampled range"
        )))
    }
}

/// Both sides with `X_t` drawn from the model itself.
pub fn weak_ito_sides(
    model: &LevyModel,
    f: &TestFunction,
    t: f64,
    mc: McParams,
) -> Result<ItoSides> {
    weak_ito_sides_with(model, model_sampler(model), f, t, mc)
}

fn model_sampler(model: &LevyModel) -> impl Fn(f64, usize, u64) -> Result<Vec<f64>> + '_ {
    move |t, n, s| sample_marginal(model, t, n, s)
}

/// Both sides with `X_t` drawn from `lhs_sampler`, an IDT process associated with `model`.
pub fn weak_ito_sides_for(
    model: &LevyModel,
    lhs_sampler: &dyn MarginalSampler,
    f: &TestFunction,
    t: f64,
    mc: McParams,
) -> Result<ItoSides> {
    weak_ito_sides_with(
        model,
        |t, n, s| lhs_sampler.sample_marginal(t, n, s),
        f,
        t,
        mc,
    )
}

fn weak_ito_sides_with(
    model: &LevyModel,
    lhs_draw: impl Fn(f64, usize, u64) -> Result<Vec<f64>>,
    f: &TestFunction,
    t: f64,
    mc: McParams,
) -> Result<ItoSides> {
    if mc.count < 2 {
        return Err(invalid("count", "need at least two replicas"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    let gen = Generator::of(model)?;
    let fx: Vec<f64> = lhs_draw(t, mc.count, rng::derive_seed(mc.seed, u64::MAX))?
        .iter()
        .map(|&x| f.f(x))
        .collect();
    check_finite(&fx, "f(X_t)")?;
    let (lhs, lhs_se) = mean_se(&fx);

    let nodes = simpson_weights(0.0, t, TIME_INTERVALS);
    let coarse = simpson_weights(0.0, t, TIME_INTERVALS / 2);
    let (mut rhs, mut rhs_var, mut head, mut head_var, mut s8) =
        (f.f(0.0), 0.0, f.f(0.0), 0.0, f.f(0.0));
    for (i, &(s, w)) in nodes.iter().enumerate() {
        let xs = sample_marginal(model, s, mc.count, rng::derive_seed(mc.seed, i as u64))?;
        let (g, corr): (Vec<f64>, Vec<f64>) = xs.iter().map(|&x| gen.apply(f, x)).unzip();
        check_finite(&g, "the generator integrand")?;
        let h: Vec<f64> = g.iter().zip(&corr).map(|(a, b)| a + b).collect();
        let (gm, gse) = mean_se(&g);
        let (hm, hse) = mean_se(&h);
        rhs += w * gm;
        rhs_var += (w * gse).powi(2);
        head += w * hm;
        head_var += (w * hse).powi(2);
        if i % 2 == 0 {
            s8 += coarse[i / 2].1 * gm;
        }
    }
    Ok(ItoSides {
        lhs,
        lhs_se,
        rhs,
        rhs_se: rhs_var.sqrt(),
        quad_err: (rhs - s8).abs(),
        headline: head,
        headline_se: head_var.sqrt(),
    })
}

/// Verdict for one triplet-form balance.
pub fn ito_verdict(model: &LevyModel, f: &TestFunction, t: f64, sides: &ItoSides) -> VerdictReport {
    VerdictReport::new(
        format!("ito {model:?} {} t={t}", f.label()),
        (sides.lhs - sides.rhs).abs(),
        sides.band(),
    )
    .with_meta("lhs", sides.lhs)
    .with_meta("rhs", sides.rhs)
    .with_meta("headline_gap", sides.headline_gap())
}

/// Verdict for the headline form, which fails for models with jumps.
pub fn headline_verdict(
    model: &LevyModel,
    f: &TestFunction,
    t: f64,
    sides: &ItoSides,
) -> VerdictReport {
    VerdictReport::new(
        format!("ito-headline {model:?} {} t={t}", f.label()),
        (sides.lhs - sides.headline).abs(),
        sides.headline_band(),
    )
    .with_meta("lhs", sides.lhs)
    .with_meta("headline", sides.headline)
    .with_meta("gap", sides.headline_gap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const MC: McParams = McParams {
        count: 20_000,
        seed: 5,
    };

    #[test]
    fn derivatives() {
        let f = TestFunction::Monomial { k: 3 };
        assert_eq!((f.f(2.0), f.d1(2.0), f.d2(2.0)), (8.0, 12.0, 12.0));
        let c = TestFunction::Cosine { omega: 2.0 };
        assert_relative_eq!(c.d2(0.3), -4.0 * libm::cos(0.6));
        assert_eq!(TestFunction::Monomial { k: 1 }.d2(5.0), 0.0);
    }

    #[test]
    fn brownian_square_is_exact_on_the_right() {
        let s = weak_ito_sides(
            &LevyModel::standard_brownian(),
            &TestFunction::Monomial { k: 2 },
            1.5,
            MC,
        )
        .unwrap();
        assert_relative_eq!(s.rhs, 1.5, epsilon = 1e-12);
        assert!(s.rhs_se < 1e-12 && s.headline_gap().abs() < 1e-12);
        assert!((s.lhs - s.rhs).abs() <= s.band());
    }

    #[test]
    fn poisson_square_balances_and_headline_is_off_by_t() {
        let m = LevyModel::Poisson {
            rate: 1.0,
            jump: 1.0,
        };
        let s = weak_ito_sides(&m, &TestFunction::Monomial { k: 2 }, 1.0, MC).unwrap();
        assert!((s.lhs - s.rhs).abs() <= s.band(), "{s:?}");
        assert_relative_eq!(s.headline_gap(), 1.0, epsilon = 1e-12);
        assert!(!headline_verdict(&m, &TestFunction::Monomial { k: 2 }, 1.0, &s).pass);
    }

    #[test]
    fn infinite_activity_and_infinite_mean_rejected() {
        let f = TestFunction::Monomial { k: 2 };
        assert!(matches!(
            weak_ito_sides(&LevyModel::Cauchy { scale: 1.0 }, &f, 1.0, MC),
            Err(Error::Precondition(_))
        ));
        let g = LevyModel::Gamma {
            shape: 1.0,
            rate: 1.0,
        };
        assert!(matches!(
            weak_ito_sides(&g, &f, 1.0, MC),
            Err(Error::Unsupported(_))
        ));
    }
}
