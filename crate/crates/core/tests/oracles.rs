//! Closed-form and frozen reference values, each computed independently of the library.

use approx::assert_relative_eq;
use idt_core::constructions::{marginal_exponent, IdtSpec};
use idt_core::fields::{marginal_triplet, rect_scale_coefficient, FieldSpec, TripletField};
use idt_core::kernels::{
    brownian_kernel, fbm_rescaled_kernel, general_rescale_kernel, kernel_idt_check,
    lamperti_stationarity_check, time_warp_kernel, volterra_constant, volterra_eq2_residual,
    volterra_eq3_violation, weak_bm_covariance, CovKernel, KernelSpec,
};
use idt_core::levy::{Atom, JumpAtom, JumpMeasureSpec, LevyModel};
use idt_core::measure::{exponent_mu, levy_measure_mu, MeasureHalfLine};
use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

// Golden values from 40-digit quadrature (mpmath), outside this crate.
const VOLTERRA_C_A1: f64 = 1.209_421_067_592_363_4;
const VOLTERRA_C_A2: f64 = 1.334_305_548_017_260_6;
const VOLTERRA_EQ3_A1_X05: f64 = -0.024_000_365_667_935_03;
const VOLTERRA_EQ3_A2_X09: f64 = -0.237_478_411_996_279_65;

#[test]
fn poisson_symbol_at_pi() {
    let m = LevyModel::Poisson {
        rate: 1.0,
        jump: 1.0,
    };
    let direct = Complex64::new(0.0, PI).exp() - 1.0;
    let psi = m.symbol(PI);
    assert!((psi - direct).norm() < 1e-15);
    assert_relative_eq!(psi.re, -2.0, epsilon = 1e-15);
}

#[test]
fn poisson_triplet_is_uncompensated_at_unit_jump() {
    let t = LevyModel::Poisson {
        rate: 1.0,
        jump: 1.0,
    }
    .triplet();
    assert_eq!(t.drift_b, 0.0);
    assert_eq!(t.gaussian_var, 0.0);
    assert_eq!(
        t.jump_measure.finite_atoms().unwrap(),
        vec![Atom {
            size: 1.0,
            rate: 1.0
        }]
    );
}

#[test]
fn compound_poisson_triplet_compensates_small_jumps() {
    let m = LevyModel::CompoundPoisson {
        rate: 3.0,
        jumps: vec![JumpAtom {
            size: 0.5,
            prob: 1.0,
        }],
    };
    let t = m.triplet();
    assert_relative_eq!(t.drift_b, 1.5, epsilon = 1e-15);
    assert_eq!(t.gaussian_var, 0.0);
    for lam in [0.3, 1.0, -2.5] {
        let direct = (Complex64::new(0.0, 0.5 * lam).exp() - 1.0) * 3.0;
        assert!((t.symbol(lam) - direct).norm() < 1e-14, "λ = {lam}");
        assert!((m.symbol(lam) - direct).norm() < 1e-14);
    }
}

#[test]
fn kernel_closed_forms() {
    let fbm = fbm_rescaled_kernel(0.25).unwrap();
    let expected = 4f64.powf(0.25) * (3.0 - 3f64.sqrt()) / 2.0;
    assert_relative_eq!(fbm.eval(1.0, 4.0), expected, max_relative = 1e-14);
    assert_relative_eq!(
        time_warp_kernel(0.25).unwrap().eval(1.0, 4.0),
        SQRT_2,
        max_relative = 1e-14
    );
    let constant = CovKernel::new("one", |_, _| 1.0);
    let g = general_rescale_kernel(&constant, 0.0).unwrap();
    for (s, t) in [(1.0, 4.0), (0.3, 2.0), (5.0, 5.0)] {
        assert_relative_eq!(g.eval(s, t), (s * t).sqrt(), max_relative = 1e-14);
    }
}

#[test]
fn min_squared_violation_at_unit_point() {
    let k = KernelSpec::MinSquared.build().unwrap();
    let r = kernel_idt_check(&k, &[2.0], &[(1.0, 1.0)], 1e-12);
    assert!(!r.pass);
    assert_eq!(r.statistic, 2.0);
}

#[test]
fn lamperti_of_brownian_kernel() {
    let k = brownian_kernel();
    for (y, z) in [(0.0, 1.0), (-1.0, 0.5), (2.0, 2.0)] {
        let c: f64 = (-(y + z) / 2.0_f64).exp() * k.eval(f64::exp(y), f64::exp(z));
        assert_relative_eq!(c, (-(y - z).abs() / 2.0).exp(), max_relative = 1e-14);
    }
    assert!(lamperti_stationarity_check(&k, &[0.0, 0.5, 1.0, 2.0], 1e-12).pass);
    assert!(
        lamperti_stationarity_check(&fbm_rescaled_kernel(0.3).unwrap(), &[0.5, 1.0], 1e-10).pass
    );
    assert!(
        !lamperti_stationarity_check(&KernelSpec::MinSquared.build().unwrap(), &[0.5], 1e-10).pass
    );
}

#[test]
fn volterra_constants_and_residuals() {
    let one = volterra_constant(1.0).unwrap();
    let two = volterra_constant(2.0).unwrap();
    assert_relative_eq!(one.c, VOLTERRA_C_A1, max_relative = 1e-10);
    assert_relative_eq!(two.c, VOLTERRA_C_A2, max_relative = 1e-10);
    assert_relative_eq!(volterra_constant(1e-6).unwrap().c, 1.0, max_relative = 1e-6);

    let eq2 = volterra_eq2_residual(&|x| one.eval(x)).abs();
    assert!(eq2 < 1e-8, "eq2 residual {eq2}");
    let r1 = volterra_eq3_violation(&|x| one.eval(x), 0.5).unwrap();
    let r2 = volterra_eq3_violation(&|x| two.eval(x), 0.9).unwrap();
    assert_relative_eq!(r1, VOLTERRA_EQ3_A1_X05, max_relative = 1e-8);
    assert_relative_eq!(r2, VOLTERRA_EQ3_A2_X09, max_relative = 1e-8);
    assert!(r1.abs() > 10.0 * eq2 && r2.abs() > 10.0 * eq2);
    assert_eq!(volterra_eq3_violation(&|_| 1.0, 0.3).unwrap(), 0.0);
}

#[test]
fn weak_brownian_covariance() {
    for t in [0.1, 0.5, 0.6, 0.75, 1.0] {
        assert_relative_eq!(weak_bm_covariance(t, t), t, max_relative = 1e-14);
    }
    assert_relative_eq!(
        weak_bm_covariance(0.5, 1.0),
        SQRT_2 / 2.0,
        max_relative = 1e-14
    );
}

#[test]
fn mixed_exponents() {
    let bm = LevyModel::standard_brownian();
    let two = MeasureHalfLine::atoms(&[(1.0, 1.0), (2.0, 1.0)]);
    for lam in [0.5, 1.0, 3.0] {
        let leb = exponent_mu(&bm, &MeasureHalfLine::lebesgue(0.0, 1.0), lam).unwrap();
        assert_relative_eq!(leb.re, -lam * lam / 6.0, max_relative = 1e-12);
        let v = exponent_mu(&bm, &two, lam).unwrap();
        assert_relative_eq!(v.re, -2.5 * lam * lam, max_relative = 1e-12);
    }
}

#[test]
fn pushed_forward_levy_measure() {
    let nu = JumpMeasureSpec::FiniteAtoms {
        atoms: vec![Atom {
            size: 1.0,
            rate: 1.0,
        }],
    };
    let v = levy_measure_mu(&nu, &MeasureHalfLine::lebesgue(0.0, 1.0), &|y| y * y).unwrap();
    assert_relative_eq!(v, 1.0 / 3.0, max_relative = 1e-12);
    let v = levy_measure_mu(&nu, &MeasureHalfLine::dirac(2.5), &|y| y * y).unwrap();
    assert_relative_eq!(v, 2.5, max_relative = 1e-14);
}

#[test]
fn construction_exponents() {
    // Sub-Gaussian α = 1 with R(s,t) = st: CF e^{−|θ|t/√2}.
    let sub = IdtSpec::SubGaussian {
        alpha: 1.0,
        kernel: KernelSpec::Product,
    };
    // Time inversion α = 1: Cauchy(t·scale).
    let inv = IdtSpec::TimeInversion {
        alpha: 1.0,
        scale: 2.0,
    };
    // Sato mix over δ₁ + δ₂: t(C₁ + C₂) with C₂ − C₁ independent of C₁, so scale 3t.
    let sato = IdtSpec::SatoMix {
        mu: MeasureHalfLine::atoms(&[(1.0, 1.0), (2.0, 1.0)]),
        scale: 1.0,
    };
    // Gaussian mix over δ₁ + δ₂: Var 1 + 2 + 2·min(1, 2) = 5 per unit time.
    let gmix = IdtSpec::GaussianMix {
        mu: MeasureHalfLine::atoms(&[(1.0, 1.0), (2.0, 1.0)]),
    };
    for (t, lam) in [(0.5, 1.0), (2.0, -0.7)] {
        let got = |s: &IdtSpec| {
            marginal_exponent(s, t, lam)
                .unwrap()
                .expect("closed form")
                .re
        };
        assert_relative_eq!(got(&sub), -lam.abs() * t / SQRT_2, max_relative = 1e-12);
        assert_relative_eq!(got(&inv), -2.0 * t * lam.abs(), max_relative = 1e-12);
        assert_relative_eq!(got(&sato), -3.0 * t * lam.abs(), max_relative = 1e-12);
        assert_relative_eq!(got(&gmix), -2.5 * t * lam * lam, max_relative = 1e-12);
    }
}

#[test]
fn field_kernels_and_triplets() {
    let sheet = FieldSpec::BrownianSheetField { n: 2 }
        .gaussian_kernel()
        .unwrap();
    assert_eq!(sheet(&[1.0, 2.0], &[2.0, 1.0]), 1.0);
    let lbm = FieldSpec::LevyParamBm { m: 2 }.gaussian_kernel().unwrap();
    assert_relative_eq!(
        lbm(&[1.0, 0.0], &[0.0, 1.0]),
        (2.0 - SQRT_2) / 2.0,
        max_relative = 1e-14
    );

    let tf = TripletField::from_models(&[
        LevyModel::standard_brownian(),
        LevyModel::Poisson {
            rate: 1.0,
            jump: 1.0,
        },
    ])
    .unwrap();
    let t = marginal_triplet(&tf, &[2.0, 3.0]).unwrap();
    assert_eq!(t.gaussian_var, 2.0);
    assert_eq!(t.drift_b, 0.0);
    assert_eq!(
        t.jump_measure.finite_atoms().unwrap(),
        vec![Atom {
            size: 1.0,
            rate: 3.0
        }]
    );
    let zero = marginal_triplet(&tf, &[0.0, 0.0]).unwrap();
    assert_eq!(zero.symbol(1.3), Complex64::new(0.0, 0.0));
    assert_eq!(
        marginal_triplet(&tf, &[1.0, 0.0]).unwrap().symbol(0.7),
        LevyModel::standard_brownian().triplet().symbol(0.7)
    );
}

#[test]
fn rectangle_scale_ratio() {
    assert_eq!(rect_scale_coefficient(1.0), 1.0);
    assert_eq!(rect_scale_coefficient(0.5), 9.0);
    let a: f64 = 1.5;
    assert_relative_eq!(
        rect_scale_coefficient(a),
        4f64.powf(1.0 / a) + 1.0 - 2.0 * 2f64.powf(1.0 / a),
        max_relative = 1e-14
    );
}

#[test]
fn fbm_at_half_is_brownian() {
    let k = idt_core::kernels::fbm_kernel(0.5).unwrap();
    for (s, t) in [(1.0, 4.0), (0.3, 0.2), (2.0, 2.0)] {
        assert_relative_eq!(k.eval(s, t), f64::min(s, t), max_relative = 1e-14);
    }
    // fBm(H) at s = t is t^{2H}.
    assert_relative_eq!(
        idt_core::kernels::fbm_kernel(0.25).unwrap().eval(4.0, 4.0),
        2.0,
        max_relative = 1e-14
    );
}

#[test]
fn additive_field_cf() {
    let spec = FieldSpec::Type2SumLevy {
        models: vec![
            LevyModel::standard_brownian(),
            LevyModel::Poisson {
                rate: 1.0,
                jump: 1.0,
            },
        ],
    };
    let lam: f64 = 0.8;
    let direct = (-lam * lam / 2.0 * 2.0 + 3.0 * (Complex64::new(0.0, lam).exp() - 1.0)).exp();
    let got = idt_core::fields::field_cf(&spec, &[2.0, 3.0], lam).unwrap();
    assert!((got - direct).norm() < 1e-14);
}

#[test]
fn trapezoid_nodes_carry_the_mass() {
    let mu = MeasureHalfLine::atoms(&[(0.5, 2.0)]);
    let nodes = idt_core::constructions::mixing_nodes(&mu, 8);
    assert_eq!(nodes, vec![(0.5, 2.0)]);
    let nodes = idt_core::constructions::mixing_nodes(&MeasureHalfLine::lebesgue(0.0, 2.0), 8);
    assert_eq!(nodes.len(), 17);
    assert_relative_eq!(
        nodes.iter().map(|n| n.1).sum::<f64>(),
        2.0,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        nodes.iter().map(|n| n.0 * n.1).sum::<f64>(),
        2.0,
        max_relative = 1e-14
    );
}

#[test]
fn ecf_band_at_ten_thousand() {
    assert_relative_eq!(
        idt_core::verify::ecf_band(10_000),
        0.03 * SQRT_2,
        max_relative = 1e-14
    );
}
