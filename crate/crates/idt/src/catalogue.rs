//! The constructions and fields the tool can simulate, each with a working example spec.

use idt_core::constructions::{IdtSpec, Tabulated};
use idt_core::fields::{FieldSpec, ScaleAtom};
use idt_core::kernels::KernelSpec;
use idt_core::levy::{LevyModel, StableKind};
use idt_core::measure::MeasureHalfLine;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Example {
    Idt(IdtSpec),
    Field(FieldSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub name: &'static str,
    /// `"idt"` or `"field"`.
    pub kind: &'static str,
    pub summary: &'static str,
    /// What the construction is known as.
    pub anchor: &'static str,
    pub example: Example,
}

fn bm() -> LevyModel {
    LevyModel::standard_brownian()
}

fn identity() -> Tabulated {
    Tabulated::from_fn(|x| x, 0.0, 1.0, 5)
}

fn two_atoms() -> MeasureHalfLine {
    MeasureHalfLine::atoms(&[(1.0, 1.0), (2.0, 1.0)])
}

fn idt(name: &'static str, summary: &'static str, anchor: &'static str, spec: IdtSpec) -> Entry {
    Entry {
        name,
        kind: "idt",
        summary,
        anchor,
        example: Example::Idt(spec),
    }
}

fn field(
    name: &'static str,
    summary: &'static str,
    anchor: &'static str,
    spec: FieldSpec,
) -> Entry {
    Entry {
        name,
        kind: "field",
        summary,
        anchor,
        example: Example::Field(spec),
    }
}

/// All catalogue entries: the eight one-parameter constructions, then the eight fields.
pub fn entries() -> Vec<Entry> {
    vec![
        idt("levy", "a Lévy process", "every Lévy process is IDT", IdtSpec::Levy { model: bm() }),
        idt(
            "sub_gaussian",
            "sqrt(xi) G_t, xi positive (alpha/2)-stable, G Gaussian with (2/alpha)-homogeneous kernel",
            "sub-Gaussian IDT process",
            IdtSpec::SubGaussian { alpha: 1.0, kernel: KernelSpec::Product },
        ),
        idt(
            "time_inversion",
            "t^(2/alpha) X_(1/t) for a symmetric strictly stable X",
            "time inversion of stable processes",
            IdtSpec::TimeInversion { alpha: 1.0, scale: 1.0 },
        ),
        idt("integral_phi", "int_0^t phi(u/t) dB_u", "Wiener integral with rescaled integrand", IdtSpec::IntegralPhi { phi: identity() }),
        idt(
            "integral_f_levy",
            "int_0^S f(s) dL_(ts)",
            "stochastic integral against a time-scaled Lévy process",
            IdtSpec::IntegralFLevy { f: identity(), model: bm() },
        ),
        idt(
            "measure_mix",
            "int mu(dg) L_(g t) for a finite-mean measure mu",
            "mixture of time-scaled copies of one Lévy path",
            IdtSpec::MeasureMix { mu: MeasureHalfLine::lebesgue(0.0, 1.0), model: bm() },
        ),
        idt("sato_mix", "t int mu(dg) C_g for a Cauchy process C", "Sato-type mixture", IdtSpec::SatoMix { mu: two_atoms(), scale: 1.0 }),
        idt("gaussian_mix", "sqrt(t) int mu(dg) B_g", "Gaussian mixture", IdtSpec::GaussianMix { mu: two_atoms() }),
        field(
            "type1_product_stable",
            "(s_1...s_N)^(1/alpha) xi with xi symmetric alpha-stable",
            "type 1 IDT field, product-stable example",
            FieldSpec::Type1ProductStable { alpha: 1.0, n: 2 },
        ),
        field(
            "type1_from_idt",
            "a one-parameter IDT process run at s_1...s_N",
            "type 1 IDT field from a process",
            FieldSpec::Type1FromIdt { inner: IdtSpec::Levy { model: bm() }, n: 2 },
        ),
        field("brownian_sheet_field", "covariance prod min(s_i, t_i)", "Brownian sheet", FieldSpec::BrownianSheetField { n: 2 }),
        field(
            "type2_sum_levy",
            "sum_j L^j(s_j) for independent Lévy processes",
            "type 2 IDT field, additive example",
            FieldSpec::Type2SumLevy { models: vec![bm(), LevyModel::Poisson { rate: 1.0, jump: 1.0 }] },
        ),
        field(
            "type2_projection",
            "a one-parameter IDT process run at <c, s>",
            "type 2 IDT field by projection",
            FieldSpec::Type2Projection { inner: IdtSpec::Levy { model: bm() }, weights: vec![1.0, 2.0] },
        ),
        field(
            "levy_param_bm",
            "covariance (|s| + |t| - |t - s|)/2",
            "Lévy's Brownian motion with multidimensional parameter",
            FieldSpec::LevyParamBm { m: 2 },
        ),
        field(
            "atomic_mix",
            "sum_k m_k X(a_k . s) for an atomic mixing measure",
            "type 1 mixture over scales",
            FieldSpec::AtomicMix {
                base: Box::new(FieldSpec::BrownianSheetField { n: 2 }),
                atoms: vec![ScaleAtom { scale: vec![1.0, 1.0], mass: 1.0 }, ScaleAtom { scale: vec![2.0, 0.5], mass: 0.5 }],
            },
        ),
        field(
            "subordinated",
            "sum_j L^j(xi^j(s_j)) with independent IDT chronometers",
            "subordination of a type 2 field",
            FieldSpec::Subordinated {
                models: vec![bm(), bm()],
                chronometers: vec![
                    IdtSpec::Levy { model: LevyModel::StableStrict { alpha: 0.5, scale: 1.0, kind: StableKind::Subordinator } };
                    2
                ],
            },
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_validate_and_cover_every_variant() {
        let e = entries();
        assert_eq!(e.len(), 16);
        for entry in &e {
            match &entry.example {
                Example::Idt(s) => {
                    s.validate().unwrap();
                    assert_eq!(s.name(), entry.name);
                }
                Example::Field(f) => {
                    f.validate().unwrap();
                    assert_eq!(f.name(), entry.name);
                }
            }
        }
        let idt: Vec<&str> = e
            .iter()
            .filter(|x| x.kind == "idt")
            .map(|x| x.name)
            .collect();
        assert_eq!(idt, IdtSpec::VARIANTS);
    }
}
