//! Seeded Monte Carlo checks of the samplers against known laws.

use idt_core::constructions::{
    build_measure_mix, IdtProcess, IdtSpec, MarginalSampler, ProcessSampler,
};
use idt_core::kernels::{weak_bm_joint, KernelSpec};
use idt_core::levy::{
    for_each_path, sample_marginal, simulate_paths, weighted_increments, LevyModel,
};
use idt_core::measure::MeasureHalfLine;
use idt_core::rng::derive_seed;
use idt_core::sheet::{simulate_levy_sheet, transpose_law_check};
use idt_core::verify::composite::decomposition_test;
use idt_core::verify::{
    default_probes, ecf_distance, ks_two_sample, mean, variance, variance_test, EmpiricalLaw,
    McParams,
};

const N: usize = 20_000;
const SEED: u64 = 7;

fn scalar(xs: Vec<f64>) -> EmpiricalLaw {
    EmpiricalLaw::scalar("x", xs, SEED)
}

fn ks(a: Vec<f64>, b: Vec<f64>) -> bool {
    ks_two_sample(&scalar(a), &scalar(b)).unwrap().pass
}

#[test]
fn convolution_of_brownian_marginals() {
    let bm = LevyModel::standard_brownian();
    let a = sample_marginal(&bm, 1.0, N, 1).unwrap();
    let b = sample_marginal(&bm, 2.0, N, 2).unwrap();
    let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
    assert!(ks(sum, sample_marginal(&bm, 3.0, N, 3).unwrap()));
}

#[test]
fn path_endpoints_follow_the_marginal() {
    let m = LevyModel::Gamma {
        shape: 2.0,
        rate: 1.5,
    };
    let paths = simulate_paths(&m, &[0.0, 0.4, 1.1, 2.0], N, 11).unwrap();
    assert!(ks(
        paths.column(3),
        sample_marginal(&m, 2.0, N, 12).unwrap()
    ));
}

#[test]
fn weighted_increments_match_path_sums() {
    let m = LevyModel::Poisson {
        rate: 2.0,
        jump: 1.0,
    };
    let times = [0.0, 0.5, 1.0, 2.5];
    let w = [1.0, -2.0, 0.5];
    let fast = weighted_increments(&m, &times, &w, 500, 5).unwrap();
    let mut slow = vec![0.0; 500];
    for_each_path(&m, &times, 500, 5, |r, p| {
        slow[r] = p.windows(2).zip(&w).map(|(d, w)| w * (d[1] - d[0])).sum();
    })
    .unwrap();
    for (a, b) in fast.iter().zip(&slow) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn brownian_sheet_variance_is_the_area() {
    let bm = LevyModel::standard_brownian();
    let xs: Vec<f64> = (0..N as u64)
        .map(|r| {
            simulate_levy_sheet(
                &bm,
                &[0.0, 1.0, 2.0],
                &[0.0, 1.5, 3.0],
                derive_seed(SEED, r),
            )
            .unwrap()
            .get(2, 2)
        })
        .collect();
    assert!(variance_test("sheet", &xs, 6.0).pass);
}

#[test]
fn poisson_sheet_mean_is_rate_times_area() {
    let m = LevyModel::Poisson {
        rate: 0.5,
        jump: 1.0,
    };
    let xs: Vec<f64> = (0..N as u64)
        .map(|r| {
            simulate_levy_sheet(&m, &[0.0, 2.0], &[0.0, 3.0], derive_seed(SEED, r))
                .unwrap()
                .get(1, 1)
        })
        .collect();
    assert!((mean(&xs) - 3.0).abs() < 4.0 * (3.0 / N as f64).sqrt());
    assert!(xs.iter().all(|x| x.fract() == 0.0 && *x >= 0.0));
}

#[test]
fn lebesgue_mix_of_brownian_motion() {
    // ∫₀¹ B_γ dγ has variance 1/3.
    let (idt, assoc) = build_measure_mix(
        MeasureHalfLine::lebesgue(0.0, 1.0),
        LevyModel::standard_brownian(),
    )
    .unwrap();
    assert!(variance_test("mix", &idt.sample_marginal(1.0, N, 1).unwrap(), 1.0 / 3.0).pass);
    assert!(
        variance_test(
            "assoc",
            &assoc.sample_marginal(1.0, N, 2).unwrap(),
            1.0 / 3.0
        )
        .pass
    );
}

#[test]
fn atomic_mix_variance_grows_linearly() {
    let mu = MeasureHalfLine::atoms(&[(1.0, 1.0), (2.0, 1.0)]);
    let (idt, _) = build_measure_mix(mu, LevyModel::standard_brownian()).unwrap();
    for t in [0.5, 2.0] {
        assert!(
            variance_test("mix", &idt.sample_marginal(t, N, 3).unwrap(), 5.0 * t).pass,
            "t = {t}"
        );
    }
}

#[test]
fn weak_brownian_endpoint_is_standard_normal() {
    let j = weak_bm_joint(&[0.5, 1.0], N, 4).unwrap();
    let x1 = j.column(1);
    assert!(ks(
        x1.clone(),
        sample_marginal(&LevyModel::standard_brownian(), 1.0, N, 5).unwrap()
    ));
    assert!(variance_test("half", &j.column(0), 0.5).pass);
}

#[test]
fn compound_poisson_mix_laplace_exponent() {
    // For L Poisson(1) and μ = Leb[0,1], X₁ = Σ jumps weighted by the tail 1 − U, so
    // −log E e^{−X₁} = ∫₀¹ (1 − e^{−(1−u)}) du = e^{−1}.
    let (idt, _) = build_measure_mix(
        MeasureHalfLine::lebesgue(0.0, 1.0),
        LevyModel::Poisson {
            rate: 1.0,
            jump: 1.0,
        },
    )
    .unwrap();
    let n = 10 * N;
    let ys: Vec<f64> = idt
        .sample_marginal(1.0, n, 6)
        .unwrap()
        .iter()
        .map(|x| (-x).exp())
        .collect();
    let m = mean(&ys);
    // Delta method: sd(log mean) ≈ sd / (mean √n).
    let band = 4.0 * variance(&ys).sqrt() / (m * (n as f64).sqrt());
    assert!(
        (-m.ln() - (-1f64).exp()).abs() < band,
        "{} vs band {band}",
        -m.ln()
    );
}

#[test]
fn ecf_detects_a_variance_change() {
    let bm = LevyModel::standard_brownian();
    let a = scalar(sample_marginal(&bm, 1.0, N, 1).unwrap());
    let b = scalar(sample_marginal(&bm, 2.0, N, 2).unwrap());
    assert!(!ecf_distance(&a, &b, &default_probes(&a, &b)).unwrap().pass);
    let c = scalar(sample_marginal(&bm, 1.0, N, 3).unwrap());
    assert!(ecf_distance(&a, &c, &default_probes(&a, &c)).unwrap().pass);
}

#[test]
fn ks_detects_a_shift() {
    let a = sample_marginal(&LevyModel::standard_brownian(), 1.0, N, 1).unwrap();
    let b: Vec<f64> = sample_marginal(&LevyModel::standard_brownian(), 1.0, N, 2)
        .unwrap()
        .iter()
        .map(|x| x + 0.2)
        .collect();
    assert!(!ks(a, b));
}

#[test]
fn sub_gaussian_decomposes() {
    let p = IdtProcess::new(IdtSpec::SubGaussian {
        alpha: 1.0,
        kernel: KernelSpec::Product,
    })
    .unwrap();
    let r = decomposition_test(
        &p,
        0.5,
        1.0,
        McParams {
            count: N,
            seed: SEED,
        },
    )
    .unwrap();
    assert!(r.pass, "{}", r.statistic);
}

#[test]
fn idt_paths_are_reproducible() {
    let p = IdtProcess::new(IdtSpec::TimeInversion {
        alpha: 1.5,
        scale: 1.0,
    })
    .unwrap();
    let a = p.sample_at(&[0.5, 1.0, 2.0], 100, 9).unwrap();
    let b = p.sample_at(&[0.5, 1.0, 2.0], 100, 9).unwrap();
    assert_eq!(a, b);
    assert!(variance(&a.column(0)).is_finite());
}

#[test]
fn sheet_law_is_transpose_symmetric() {
    let bm = LevyModel::standard_brownian();
    let points = [(1.0, 2.0), (0.5, 3.0)];
    assert!(
        transpose_law_check(&bm, &points, N, SEED, None)
            .unwrap()
            .pass
    );
    assert!(
        !transpose_law_check(&bm, &points, N, SEED, Some(1.1))
            .unwrap()
            .pass
    );
}

#[test]
fn weak_brownian_paths_start_at_zero() {
    let paths = idt_core::kernels::weak_bm_path(&[0.0, 0.25, 1.0], 50, 3).unwrap();
    assert_eq!(paths.len(), 50);
    assert!(paths
        .iter()
        .all(|p| p.values[0] == 0.0 && p.values.len() == 3));
}
