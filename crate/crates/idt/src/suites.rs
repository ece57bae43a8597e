//! Pre-registered verification suites.
//!
//! Each item has a fixed name, an expected outcome, and draws its randomness from
//! `derive_seed_str(root_seed, name)`, so its verdict does not depend on which suite runs it.

use std::fmt;
use std::str::FromStr;

use idt_core::constructions::{
    build_gaussian_mix, build_integral_f_levy, build_integral_phi, build_levy, build_measure_mix,
    build_sato_mix, build_sub_gaussian, build_time_inversion, IdtProcess, IdtSpec, MarginalSampler,
    Tabulated, WeakBrownian,
};
use idt_core::fields::{
    default_kernel_pairs, default_points, increment_stationarity_check, operator_scaling_check,
    rect_dependence_check, rect_scale_coefficient, sample_field, subordinate_type2,
    type1_cov_check, type1_idt_check, type2_cov_check, type2_idt_check, type2_triplet_check,
    FieldSpec, Rect,
};
use idt_core::ito::{headline_verdict, weak_ito_sides, TestFunction};
use idt_core::kernels::{kernel_idt_check, KernelSpec};
use idt_core::levy::{LevyModel, StableKind};
use idt_core::measure::{exponent_mu, MeasureHalfLine};
use idt_core::report::VerdictReport;
use idt_core::rng::derive_seed_str;
use idt_core::verify::composite::{
    association_test, decomposition_test, idt_joint_test, idt_marginal_test, ito_balance_test,
};
use idt_core::verify::{default_probes, ecf_vs_exact, variance_test, EmpiricalLaw, McParams};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::AppError;

/// Smallest replica count accepted by `verify`.
pub const MIN_VERIFY_COUNT: usize = 1_000;
/// Replica count used when neither flag nor config sets one.
pub const DEFAULT_COUNT: usize = 100_000;
/// Tolerance of exact kernel identities.
pub const KERNEL_TOL: f64 = 1e-12;

pub const SUITE_NAMES: [&str; 8] = [
    "association",
    "idt",
    "ito",
    "decomposition",
    "type1",
    "type2",
    "counterexamples",
    "all",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Association,
    Idt,
    Ito,
    Decomposition,
    Type1,
    Type2,
    Counterexamples,
    All,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Association,
        Suite::Idt,
        Suite::Ito,
        Suite::Decomposition,
        Suite::Type1,
        Suite::Type2,
        Suite::Counterexamples,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        SUITE_NAMES[Self::ALL.iter().position(|s| *s == self).unwrap_or(0)]
    }

    pub fn default_count(self) -> usize {
        DEFAULT_COUNT
    }

    /// The items of this suite in registry order.
    pub fn items(self) -> Vec<&'static Item> {
        REGISTRY
            .iter()
            .filter(|i| self == Suite::All || i.groups.contains(&self))
            .collect()
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SUITE_NAMES
            .iter()
            .position(|n| *n == s)
            .map(|i| Self::ALL[i])
            .ok_or_else(|| AppError::UnknownSuite(s.to_string()))
    }
}

type Runner = fn(McParams) -> idt_core::Result<VerdictReport>;

/// One registered check.
pub struct Item {
    pub name: &'static str,
    pub groups: &'static [Suite],
    /// `false` for detectors, which must fail.
    pub expect_pass: bool,
    run: Runner,
}

impl fmt::Debug for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Item")
            .field("name", &self.name)
            .field("expect_pass", &self.expect_pass)
            .finish()
    }
}

impl Item {
    pub fn seed(&self, root: u64) -> u64 {
        derive_seed_str(root, self.name)
    }

    pub fn run(&self, root: u64, count: usize) -> ItemOutcome {
        let mc = McParams {
            count,
            seed: self.seed(root),
        };
        let (report, error) = match (self.run)(mc) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let passed = report.as_ref().map(|r| r.pass);
        ItemOutcome {
            name: self.name.to_string(),
            expect_pass: self.expect_pass,
            passed,
            met: passed == Some(self.expect_pass),
            seed: mc.seed,
            report,
            error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemOutcome {
    pub name: String,
    pub expect_pass: bool,
    /// `None` when the item errored.
    pub passed: Option<bool>,
    /// Whether the outcome matched the expectation.
    pub met: bool,
    pub seed: u64,
    pub report: Option<VerdictReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub header: String,
    pub suite: Suite,
    pub seed: u64,
    pub count: usize,
    pub config_hash: String,
    pub items: Vec<ItemOutcome>,
}

impl SuiteReport {
    pub fn all_met(&self) -> bool {
        self.items.iter().all(|i| i.met)
    }

    /// 0 when every expectation is met, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_met() {
            0
        } else {
            1
        }
    }
}

/// Runs every item of `suite`, calling `progress` after each.
pub fn run_suite(
    suite: Suite,
    seed: u64,
    count: usize,
    config_hash: &str,
    mut progress: impl FnMut(&ItemOutcome),
) -> SuiteReport {
    let items = suite
        .items()
        .into_iter()
        .map(|item| {
            let o = item.run(seed, count);
            progress(&o);
            o
        })
        .collect();
    SuiteReport {
        header: format!("# config_hash={config_hash} seed={seed}"),
        suite,
        seed,
        count,
        config_hash: config_hash.to_string(),
        items,
    }
}

use Suite::{
    Association as A, Counterexamples as C, Decomposition as D, Idt as I, Ito as T, Type1 as T1,
    Type2 as T2,
};

const TIMES: [f64; 3] = [0.5, 1.0, 2.0];

fn bm() -> LevyModel {
    LevyModel::standard_brownian()
}

fn poisson() -> LevyModel {
    LevyModel::Poisson {
        rate: 1.0,
        jump: 1.0,
    }
}

fn two_atoms() -> MeasureHalfLine {
    MeasureHalfLine::atoms(&[(1.0, 1.0), (2.0, 1.0)])
}

fn named(mut r: VerdictReport, name: &str) -> VerdictReport {
    r.name = name.to_string();
    r
}

fn assoc(
    name: &str,
    built: idt_core::Result<(IdtProcess, idt_core::constructions::AssociatedLevy)>,
    mc: McParams,
) -> idt_core::Result<VerdictReport> {
    let (p, a) = built?;
    Ok(named(association_test(&p, &a, &TIMES, mc)?, name))
}

fn sub_gaussian() -> idt_core::Result<IdtProcess> {
    Ok(build_sub_gaussian(1.0, KernelSpec::Product)?.0)
}

fn process(spec: IdtSpec) -> idt_core::Result<IdtProcess> {
    IdtProcess::new(spec)
}

fn ito_item(
    name: &str,
    model: LevyModel,
    f: TestFunction,
    t: f64,
    mc: McParams,
) -> idt_core::Result<VerdictReport> {
    Ok(named(ito_balance_test(&model, &[f], &[t], mc)?, name))
}

fn decomp(name: &str, p: IdtProcess, c: f64, mc: McParams) -> idt_core::Result<VerdictReport> {
    Ok(named(decomposition_test(&p, c, 1.0, mc)?, name))
}

fn kernel_family_check() -> VerdictReport {
    let grid = kernel_grid();
    let mut subs = Vec::new();
    for spec in [0.25, 0.5, 0.7]
        .map(|h| KernelSpec::FbmRescaled { h })
        .into_iter()
        .chain([0.0, 0.25, 0.5].map(|alpha| KernelSpec::TimeWarp { alpha }))
    {
        subs.push(match spec.build() {
            Ok(k) => kernel_idt_check(&k, &KERNEL_SCALES, &grid, KERNEL_TOL),
            Err(e) => VerdictReport::new(format!("{spec:?}"), f64::INFINITY, KERNEL_TOL)
                .with_meta("error", e),
        });
    }
    VerdictReport::all_of("idt.kernel_homogeneity", subs)
}

/// Scales applied on the kernel probe grid.
pub const KERNEL_SCALES: [f64; 3] = [0.5, 2.0, 3.0];

/// A 10×10 grid of `(s, t)` pairs in `(0, 3]²`.
pub fn kernel_grid() -> Vec<(f64, f64)> {
    let pts: Vec<f64> = (1..=10).map(|i| 0.3 * f64::from(i)).collect();
    pts.iter()
        .flat_map(|&s| pts.iter().map(move |&t| (s, t)))
        .collect()
}

fn min_squared_check() -> idt_core::Result<VerdictReport> {
    Ok(named(
        kernel_idt_check(
            &KernelSpec::MinSquared.build()?,
            &KERNEL_SCALES,
            &kernel_grid(),
            KERNEL_TOL,
        ),
        "idt.min_squared_homogeneity",
    ))
}

fn sheet() -> FieldSpec {
    FieldSpec::BrownianSheetField { n: 2 }
}

fn lbm() -> FieldSpec {
    FieldSpec::LevyParamBm { m: 2 }
}

fn subordinated() -> idt_core::Result<FieldSpec> {
    let half = IdtSpec::Levy {
        model: LevyModel::StableStrict {
            alpha: 0.5,
            scale: 1.0,
            kind: StableKind::Subordinator,
        },
    };
    subordinate_type2(
        &FieldSpec::Type2SumLevy {
            models: vec![bm(), bm()],
        },
        vec![half.clone(), half],
    )
}

fn rect(l: [f64; 2], u: [f64; 2]) -> idt_core::Result<Rect> {
    Rect::new(l.to_vec(), u.to_vec())
}

fn stationarity(name: &str, alpha: f64, mc: McParams) -> idt_core::Result<VerdictReport> {
    let spec = FieldSpec::Type1ProductStable { alpha, n: 2 };
    let r = increment_stationarity_check(
        &spec,
        &rect([1.0, 1.0], [2.0, 2.0])?,
        &rect([0.0, 0.0], [1.0, 1.0])?,
        mc,
    )?;
    Ok(named(r, name).with_meta("scale_ratio", rect_scale_coefficient(alpha)))
}

const HALF: [[f64; 1]; 1] = [[0.5]];

fn half_q() -> Vec<Vec<f64>> {
    HALF.iter().map(|r| r.to_vec()).collect()
}

static REGISTRY: &[Item] = &[
    // Association of one-dimensional marginals.
    Item {
        name: "association.levy_poisson",
        groups: &[A],
        expect_pass: true,
        run: |mc| assoc("association.levy_poisson", build_levy(poisson()), mc),
    },
    Item {
        name: "association.sub_gaussian",
        groups: &[A],
        expect_pass: true,
        run: |mc| {
            assoc(
                "association.sub_gaussian",
                build_sub_gaussian(1.0, KernelSpec::Product),
                mc,
            )
        },
    },
    Item {
        name: "association.time_inversion",
        groups: &[A],
        expect_pass: true,
        run: |mc| {
            assoc(
                "association.time_inversion",
                build_time_inversion(1.0, 1.0),
                mc,
            )
        },
    },
    Item {
        name: "association.integral_phi",
        groups: &[A],
        expect_pass: true,
        run: |mc| {
            assoc(
                "association.integral_phi",
                build_integral_phi(Tabulated::from_fn(|x| x, 0.0, 1.0, 64)),
                mc,
            )
        },
    },
    Item {
        name: "association.integral_f_levy",
        groups: &[A],
        expect_pass: true,
        run: |mc| {
            assoc(
                "association.integral_f_levy",
                build_integral_f_levy(Tabulated::from_fn(|x| x, 0.0, 1.0, 64), bm()),
                mc,
            )
        },
    },
    Item {
        name: "association.measure_mix",
        groups: &[A],
        expect_pass: true,
        run: |mc| {
            assoc(
                "association.measure_mix",
                build_measure_mix(MeasureHalfLine::lebesgue(0.0, 1.0), bm()),
                mc,
            )
        },
    },
    Item {
        name: "association.measure_mix_variance",
        groups: &[A],
        expect_pass: true,
        run: |mc| {
            let (p, _) = build_measure_mix(MeasureHalfLine::lebesgue(0.0, 1.0), bm())?;
            let x = p.sample_marginal(1.0, mc.count, mc.seed)?;
            Ok(named(
                variance_test("measure_mix X_1", &x, 1.0 / 3.0),
                "association.measure_mix_variance",
            ))
        },
    },
    Item {
        name: "association.mixed_exponent_cf",
        groups: &[A],
        expect_pass: true,
        run: |mc| {
            let mu = MeasureHalfLine::lebesgue(0.0, 1.0);
            let (_, a) = build_measure_mix(mu.clone(), bm())?;
            let law = EmpiricalLaw::scalar(
                "associated t=1",
                a.sample_marginal(1.0, mc.count, mc.seed)?,
                mc.seed,
            );
            let probes = default_probes(&law, &law);
            let exact = |th: &[f64]| {
                exponent_mu(&bm(), &mu, th[0])
                    .map(Complex64::exp)
                    .unwrap_or(Complex64::new(f64::NAN, 0.0))
            };
            Ok(named(
                ecf_vs_exact(&law, exact, &probes)?,
                "association.mixed_exponent_cf",
            ))
        },
    },
    Item {
        name: "association.sato_mix",
        groups: &[A],
        expect_pass: true,
        run: |mc| assoc("association.sato_mix", build_sato_mix(two_atoms(), 1.0), mc),
    },
    Item {
        name: "association.gaussian_mix",
        groups: &[A],
        expect_pass: true,
        run: |mc| {
            assoc(
                "association.gaussian_mix",
                build_gaussian_mix(two_atoms()),
                mc,
            )
        },
    },
    // n-fold identities, kernel homogeneity, and the weak/full separation.
    Item {
        name: "idt.kernel_homogeneity",
        groups: &[I],
        expect_pass: true,
        run: |_| Ok(kernel_family_check()),
    },
    Item {
        name: "idt.min_squared_homogeneity",
        groups: &[I],
        expect_pass: false,
        run: |_| min_squared_check(),
    },
    Item {
        name: "idt.brownian_marginal_n2",
        groups: &[I],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                idt_marginal_test(&process(IdtSpec::Levy { model: bm() })?, 2, 1.0, mc)?,
                "idt.brownian_marginal_n2",
            ))
        },
    },
    Item {
        name: "idt.brownian_marginal_n3",
        groups: &[I],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                idt_marginal_test(&process(IdtSpec::Levy { model: bm() })?, 3, 1.0, mc)?,
                "idt.brownian_marginal_n3",
            ))
        },
    },
    Item {
        name: "idt.brownian_joint_n2",
        groups: &[I],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                idt_joint_test(&process(IdtSpec::Levy { model: bm() })?, 2, &[0.5, 1.0], mc)?,
                "idt.brownian_joint_n2",
            ))
        },
    },
    Item {
        name: "idt.brownian_joint_n3",
        groups: &[I],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                idt_joint_test(&process(IdtSpec::Levy { model: bm() })?, 3, &[0.5, 1.0], mc)?,
                "idt.brownian_joint_n3",
            ))
        },
    },
    Item {
        name: "idt.measure_mix_marginal_n2",
        groups: &[I],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                idt_marginal_test(
                    &build_measure_mix(MeasureHalfLine::lebesgue(0.0, 1.0), bm())?.0,
                    2,
                    1.0,
                    mc,
                )?,
                "idt.measure_mix_marginal_n2",
            ))
        },
    },
    Item {
        name: "idt.measure_mix_marginal_n3",
        groups: &[I],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                idt_marginal_test(
                    &build_measure_mix(MeasureHalfLine::lebesgue(0.0, 1.0), bm())?.0,
                    3,
                    1.0,
                    mc,
                )?,
                "idt.measure_mix_marginal_n3",
            ))
        },
    },
    Item {
        name: "idt.measure_mix_joint_n2",
        groups: &[I],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                idt_joint_test(&build_measure_mix(two_atoms(), bm())?.0, 2, &[0.5, 1.0], mc)?,
                "idt.measure_mix_joint_n2",
            ))
        },
    },
    Item {
        name: "idt.measure_mix_joint_n3",
        groups: &[I],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                idt_joint_test(&build_measure_mix(two_atoms(), bm())?.0, 3, &[0.5, 1.0], mc)?,
                "idt.measure_mix_joint_n3",
            ))
        },
    },
    Item {
        name: "idt.sub_gaussian_marginal_n2",
        groups: &[I],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                idt_marginal_test(&sub_gaussian()?, 2, 1.0, mc)?,
                "idt.sub_gaussian_marginal_n2",
            ))
        },
    },
    Item {
        name: "idt.sub_gaussian_marginal_n3",
        groups: &[I],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                idt_marginal_test(&sub_gaussian()?, 3, 1.0, mc)?,
                "idt.sub_gaussian_marginal_n3",
            ))
        },
    },
    Item {
        name: "idt.sub_gaussian_joint_n2",
        groups: &[I],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                idt_joint_test(&sub_gaussian()?, 2, &[0.5, 1.0], mc)?,
                "idt.sub_gaussian_joint_n2",
            ))
        },
    },
    Item {
        name: "idt.sub_gaussian_joint_n3",
        groups: &[I],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                idt_joint_test(&sub_gaussian()?, 3, &[0.5, 1.0], mc)?,
                "idt.sub_gaussian_joint_n3",
            ))
        },
    },
    Item {
        name: "idt.weak_bm_marginal_n2",
        groups: &[I],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                idt_marginal_test(&WeakBrownian, 2, 0.5, mc)?,
                "idt.weak_bm_marginal_n2",
            ))
        },
    },
    Item {
        name: "idt.weak_bm_joint_n2",
        groups: &[I, C],
        expect_pass: false,
        run: |mc| {
            Ok(named(
                idt_joint_test(&WeakBrownian, 2, &[0.25, 0.5], mc)?,
                "idt.weak_bm_joint_n2",
            ))
        },
    },
    // Weak Itô formula.
    Item {
        name: "ito.brownian_square",
        groups: &[T],
        expect_pass: true,
        run: |mc| {
            ito_item(
                "ito.brownian_square",
                bm(),
                TestFunction::Monomial { k: 2 },
                1.0,
                mc,
            )
        },
    },
    Item {
        name: "ito.brownian_drift_linear",
        groups: &[T],
        expect_pass: true,
        run: |mc| {
            ito_item(
                "ito.brownian_drift_linear",
                LevyModel::BrownianDrift {
                    drift: 1.0,
                    variance: 1.0,
                },
                TestFunction::Monomial { k: 1 },
                2.0,
                mc,
            )
        },
    },
    Item {
        name: "ito.brownian_drift_cubic",
        groups: &[T],
        expect_pass: true,
        run: |mc| {
            ito_item(
                "ito.brownian_drift_cubic",
                LevyModel::BrownianDrift {
                    drift: 1.0,
                    variance: 1.0,
                },
                TestFunction::Monomial { k: 3 },
                0.5,
                mc,
            )
        },
    },
    Item {
        name: "ito.poisson_square",
        groups: &[T],
        expect_pass: true,
        run: |mc| {
            ito_item(
                "ito.poisson_square",
                poisson(),
                TestFunction::Monomial { k: 2 },
                1.0,
                mc,
            )
        },
    },
    Item {
        name: "ito.poisson_headline_gap",
        groups: &[T],
        expect_pass: true,
        run: |mc| {
            let s = weak_ito_sides(&poisson(), &TestFunction::Monomial { k: 2 }, 1.0, mc)?;
            Ok(VerdictReport::new(
                "ito.poisson_headline_gap",
                (s.headline_gap() - 1.0).abs(),
                s.headline_band(),
            )
            .with_meta("gap", s.headline_gap()))
        },
    },
    Item {
        name: "ito.poisson_headline_form",
        groups: &[T, C],
        expect_pass: false,
        run: |mc| {
            let f = TestFunction::Monomial { k: 2 };
            let s = weak_ito_sides(&poisson(), &f, 1.0, mc)?;
            Ok(named(
                headline_verdict(&poisson(), &f, 1.0, &s),
                "ito.poisson_headline_form",
            ))
        },
    },
    // Temporal decomposition.
    Item {
        name: "decomposition.brownian_c025",
        groups: &[D],
        expect_pass: true,
        run: |mc| {
            decomp(
                "decomposition.brownian_c025",
                process(IdtSpec::Levy { model: bm() })?,
                0.25,
                mc,
            )
        },
    },
    Item {
        name: "decomposition.brownian_c050",
        groups: &[D],
        expect_pass: true,
        run: |mc| {
            decomp(
                "decomposition.brownian_c050",
                process(IdtSpec::Levy { model: bm() })?,
                0.5,
                mc,
            )
        },
    },
    Item {
        name: "decomposition.brownian_c075",
        groups: &[D],
        expect_pass: true,
        run: |mc| {
            decomp(
                "decomposition.brownian_c075",
                process(IdtSpec::Levy { model: bm() })?,
                0.75,
                mc,
            )
        },
    },
    Item {
        name: "decomposition.cauchy_inversion_c025",
        groups: &[D],
        expect_pass: true,
        run: |mc| {
            decomp(
                "decomposition.cauchy_inversion_c025",
                build_time_inversion(1.0, 1.0)?.0,
                0.25,
                mc,
            )
        },
    },
    Item {
        name: "decomposition.cauchy_inversion_c050",
        groups: &[D],
        expect_pass: true,
        run: |mc| {
            decomp(
                "decomposition.cauchy_inversion_c050",
                build_time_inversion(1.0, 1.0)?.0,
                0.5,
                mc,
            )
        },
    },
    Item {
        name: "decomposition.cauchy_inversion_c075",
        groups: &[D],
        expect_pass: true,
        run: |mc| {
            decomp(
                "decomposition.cauchy_inversion_c075",
                build_time_inversion(1.0, 1.0)?.0,
                0.75,
                mc,
            )
        },
    },
    Item {
        name: "decomposition.sub_gaussian_c025",
        groups: &[D],
        expect_pass: true,
        run: |mc| decomp("decomposition.sub_gaussian_c025", sub_gaussian()?, 0.25, mc),
    },
    Item {
        name: "decomposition.sub_gaussian_c050",
        groups: &[D],
        expect_pass: true,
        run: |mc| decomp("decomposition.sub_gaussian_c050", sub_gaussian()?, 0.5, mc),
    },
    Item {
        name: "decomposition.sub_gaussian_c075",
        groups: &[D],
        expect_pass: true,
        run: |mc| decomp("decomposition.sub_gaussian_c075", sub_gaussian()?, 0.75, mc),
    },
    // Type 1 fields.
    Item {
        name: "type1.sheet_idt",
        groups: &[T1],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                type1_idt_check(&sheet(), &[2, 3], &default_points(2), mc)?,
                "type1.sheet_idt",
            ))
        },
    },
    Item {
        name: "type1.product_stable_idt",
        groups: &[T1],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                type1_idt_check(
                    &FieldSpec::Type1ProductStable { alpha: 2.0, n: 2 },
                    &[2, 2],
                    &default_points(2),
                    mc,
                )?,
                "type1.product_stable_idt",
            ))
        },
    },
    Item {
        name: "type1.sheet_covariance",
        groups: &[T1],
        expect_pass: true,
        run: |_| {
            let k = sheet()
                .gaussian_kernel()
                .ok_or_else(|| idt_core::Error::Precondition("no kernel".into()))?;
            Ok(named(
                type1_cov_check(&*k, &[2.0, 3.0], &default_kernel_pairs(2), KERNEL_TOL)?,
                "type1.sheet_covariance",
            ))
        },
    },
    Item {
        name: "type1.levy_param_bm_covariance",
        groups: &[T1],
        expect_pass: false,
        run: |_| {
            let k = lbm()
                .gaussian_kernel()
                .ok_or_else(|| idt_core::Error::Precondition("no kernel".into()))?;
            Ok(named(
                type1_cov_check(&*k, &[2.0, 1.0], &default_kernel_pairs(2), KERNEL_TOL)?,
                "type1.levy_param_bm_covariance",
            ))
        },
    },
    Item {
        name: "type1.sum_levy_idt",
        groups: &[T1],
        expect_pass: false,
        run: |mc| {
            Ok(named(
                type1_idt_check(
                    &FieldSpec::Type2SumLevy {
                        models: vec![bm(), bm()],
                    },
                    &[2, 1],
                    &default_points(2),
                    mc,
                )?,
                "type1.sum_levy_idt",
            ))
        },
    },
    Item {
        name: "type1.rect_coefficient",
        groups: &[T1],
        expect_pass: true,
        run: |_| {
            let dev = (rect_scale_coefficient(1.0) - 1.0)
                .abs()
                .max((rect_scale_coefficient(0.5) - 9.0).abs());
            Ok(VerdictReport::new("type1.rect_coefficient", dev, 0.0))
        },
    },
    Item {
        name: "type1.stationarity_alpha1",
        groups: &[T1],
        expect_pass: true,
        run: |mc| stationarity("type1.stationarity_alpha1", 1.0, mc),
    },
    Item {
        name: "type1.stationarity_alpha_half",
        groups: &[T1, C],
        expect_pass: false,
        run: |mc| stationarity("type1.stationarity_alpha_half", 0.5, mc),
    },
    // Type 2 fields.
    Item {
        name: "type2.sum_levy_idt",
        groups: &[T2],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                type2_idt_check(
                    &FieldSpec::Type2SumLevy {
                        models: vec![bm(), poisson()],
                    },
                    2,
                    &default_points(2),
                    mc,
                )?,
                "type2.sum_levy_idt",
            ))
        },
    },
    Item {
        name: "type2.levy_param_bm_idt",
        groups: &[T2],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                type2_idt_check(&lbm(), 2, &default_points(2), mc)?,
                "type2.levy_param_bm_idt",
            ))
        },
    },
    Item {
        name: "type2.levy_param_bm_covariance",
        groups: &[T2],
        expect_pass: true,
        run: |_| {
            let k = lbm()
                .gaussian_kernel()
                .ok_or_else(|| idt_core::Error::Precondition("no kernel".into()))?;
            Ok(named(
                type2_cov_check(&*k, 2.0, &default_kernel_pairs(2), KERNEL_TOL)?,
                "type2.levy_param_bm_covariance",
            ))
        },
    },
    Item {
        name: "type2.levy_param_bm_operator_scaling",
        groups: &[T2],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                operator_scaling_check(&lbm(), &half_q(), 2.0, &default_points(2), mc)?,
                "type2.levy_param_bm_operator_scaling",
            ))
        },
    },
    Item {
        name: "type2.sum_levy_operator_scaling",
        groups: &[T2],
        expect_pass: true,
        run: |mc| {
            let spec = FieldSpec::Type2SumLevy {
                models: vec![bm(), bm()],
            };
            Ok(named(
                operator_scaling_check(&spec, &half_q(), 4.0, &default_points(2), mc)?,
                "type2.sum_levy_operator_scaling",
            ))
        },
    },
    Item {
        name: "type2.triplet_cf",
        groups: &[T2],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                type2_triplet_check(
                    &FieldSpec::Type2SumLevy {
                        models: vec![bm(), poisson()],
                    },
                    &[2.0, 3.0],
                    mc,
                )?,
                "type2.triplet_cf",
            ))
        },
    },
    Item {
        name: "type2.subordinated_idt",
        groups: &[T2],
        expect_pass: true,
        run: |mc| {
            Ok(named(
                type2_idt_check(&subordinated()?, 2, &default_points(2), mc)?,
                "type2.subordinated_idt",
            ))
        },
    },
    Item {
        name: "type2.subordinated_cf",
        groups: &[T2],
        expect_pass: true,
        run: |mc| {
            let s = sample_field(&subordinated()?, &[vec![1.0, 1.0]], mc.count, mc.seed)?;
            let law = s.law("subordinated (1,1)");
            let probes = default_probes(&law, &law);
            let k = std::f64::consts::SQRT_2;
            Ok(named(
                ecf_vs_exact(
                    &law,
                    |th: &[f64]| Complex64::new((-k * th[0].abs()).exp(), 0.0),
                    &probes,
                )?,
                "type2.subordinated_cf",
            ))
        },
    },
    Item {
        name: "type2.sheet_idt",
        groups: &[T2, C],
        expect_pass: false,
        run: |mc| {
            Ok(named(
                type2_idt_check(&sheet(), 2, &default_points(2), mc)?,
                "type2.sheet_idt",
            ))
        },
    },
    Item {
        name: "type2.levy_param_bm_rect_dependence",
        groups: &[T2],
        expect_pass: false,
        run: |mc| {
            Ok(named(
                rect_dependence_check(
                    &lbm(),
                    &rect([0.0, 0.0], [1.0, 1.0])?,
                    &rect([1.0, 0.0], [2.0, 1.0])?,
                    mc,
                )?,
                "type2.levy_param_bm_rect_dependence",
            ))
        },
    },
    Item {
        name: "type2.poisson_half_selfsimilar",
        groups: &[T2, C],
        expect_pass: false,
        run: |mc| {
            let spec = FieldSpec::Type2SumLevy {
                models: vec![poisson(), poisson()],
            };
            Ok(named(
                operator_scaling_check(&spec, &half_q(), 4.0, &default_points(2), mc)?,
                "type2.poisson_half_selfsimilar",
            ))
        },
    },
];

/// Every registered item.
pub fn registry() -> &'static [Item] {
    REGISTRY
}
