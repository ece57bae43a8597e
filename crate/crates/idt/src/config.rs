//! TOML run configurations.
//!
//! A `simulate` config names one target:
//!
//! ```toml
//! seed = 7
//! count = 2
//! output = "paths.csv"
//!
//! [target]
//! kind = "levy_path"
//! times = [0.0, 0.5, 1.0]
//! model = { family = "brownian_drift", drift = 0.0, variance = 1.0 }
//! ```
//!
//! Any inline table of the form `{ csv = "file.csv" }` is replaced by the file contents:
//! a two-column `x,value` table becomes a tabulated function, and under a `points` key
//! each row becomes one point. Paths are relative to the config file.
//!
//! A `verify` config selects a registered suite:
//!
//! ```toml
//! suite = "association"
//! seed = 11
//! count = 100000
//! report = "association.json"
//! ```

use std::path::{Path, PathBuf};

use idt_core::constructions::IdtSpec;
use idt_core::fields::FieldSpec;
use idt_core::kernels::KernelSpec;
use idt_core::levy::LevyModel;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{AppError, AppResult};
use crate::io;
use crate::suites::{Suite, MIN_VERIFY_COUNT};

/// Root seed when neither the config, the flag nor the environment sets one.
pub const DEFAULT_SEED: u64 = 20_241_016;
/// Environment variable overriding the root seed.
pub const SEED_ENV: &str = "IDT_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Target {
    /// Paths of a Lévy model on a grid starting at 0.
    LevyPath { model: LevyModel, times: Vec<f64> },
    /// A Lévy sheet on `s_times × t_times`.
    LevySheet {
        model: LevyModel,
        s_times: Vec<f64>,
        t_times: Vec<f64>,
    },
    /// A centered Gaussian process with a named kernel.
    Gaussian { kernel: KernelSpec, times: Vec<f64> },
    /// An IDT construction, or with `associated = true` marginal draws of its associated
    /// Lévy process.
    Idt {
        spec: IdtSpec,
        times: Vec<f64>,
        #[serde(default)]
        associated: bool,
    },
    /// The weak-Brownian splice on `[0, 1]`.
    WeakBrownian { times: Vec<f64> },
    /// A multiparameter field at explicit points.
    Field {
        spec: FieldSpec,
        points: Vec<Vec<f64>>,
    },
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Self::LevyPath { .. } => "levy_path",
            Self::LevySheet { .. } => "levy_sheet",
            Self::Gaussian { .. } => "gaussian",
            Self::Idt { .. } => "idt",
            Self::WeakBrownian { .. } => "weak_brownian",
            Self::Field { .. } => "field",
        }
    }
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "one")]
    pub count: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
    pub target: Target,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub suite: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub report: Option<PathBuf>,
}

/// The effective verify settings after flags, environment and defaults are applied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyPlan {
    pub suite: Suite,
    pub seed: u64,
    pub count: usize,
}

impl SimulateConfig {
    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn parse(text: &str, base: &Path) -> AppResult<Self> {
        let mut value: toml::Value = toml::from_str(text)?;
        resolve_csv(&mut value, None, base)?;
        let cfg: Self = value.try_into()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> AppResult<()> {
        if self.count == 0 {
            return Err(AppError::Config("count must be at least 1".into()));
        }
        match &self.target {
            Target::LevyPath { model, .. } | Target::LevySheet { model, .. } => model.validate()?,
            Target::Gaussian { kernel, .. } => {
                kernel.build()?;
            }
            Target::Idt { spec, .. } => spec.validate()?,
            Target::Field { spec, .. } => spec.validate()?,
            Target::WeakBrownian { .. } => {}
        }
        Ok(())
    }
}

impl VerifyConfig {
    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Ok(toml::from_str(&text)?)
    }

    /// Precedence for the seed: flag, then environment, then config, then default.
    pub fn plan(&self, seed_flag: Option<u64>, count_flag: Option<usize>) -> AppResult<VerifyPlan> {
        let suite: Suite = self.suite.parse()?;
        let seed = match seed_flag {
            Some(s) => s,
            None => env_seed()?.or(self.seed).unwrap_or(DEFAULT_SEED),
        };
        let count = count_flag.or(self.count).unwrap_or(suite.default_count());
        if count < MIN_VERIFY_COUNT {
            return Err(AppError::Config(format!(
                "count = {count} is below the minimum of {MIN_VERIFY_COUNT} for verify"
            )));
        }
        Ok(VerifyPlan { suite, seed, count })
    }
}

/// The root seed from the environment, if set.
pub fn env_seed() -> AppResult<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => {
            v.trim().parse().map(Some).map_err(|_| {
                AppError::Config(format!("{SEED_ENV}={v:?} is not an unsigned integer"))
            })
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(AppError::Config(format!("{SEED_ENV}: {e}"))),
    }
}

/// SHA-256 of the canonical JSON form of `cfg`, in hex.
pub fn config_hash<T: Serialize>(cfg: &T) -> AppResult<String> {
    let bytes = serde_json::to_vec(cfg)?;
    Ok(Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

fn resolve_csv(value: &mut toml::Value, key: Option<&str>, base: &Path) -> AppResult<()> {
    match value {
        toml::Value::Table(t) => {
            if t.len() == 1 {
                if let Some(toml::Value::String(file)) = t.get("csv") {
                    let path = base.join(file);
                    *value = if key == Some("points") {
                        let rows = io::read_points(&path)?;
                        toml::Value::Array(
                            rows.into_iter()
                                .map(|r| {
                                    toml::Value::Array(
                                        r.into_iter().map(toml::Value::Float).collect(),
                                    )
                                })
                                .collect(),
                        )
                    } else {
                        let tab = io::read_tabulated(&path)?;
                        let mut out = toml::Table::new();
                        out.insert(
                            "xs".into(),
                            toml::Value::Array(
                                tab.xs.into_iter().map(toml::Value::Float).collect(),
                            ),
                        );
                        out.insert(
                            "values".into(),
                            toml::Value::Array(
                                tab.values.into_iter().map(toml::Value::Float).collect(),
                            ),
                        );
                        toml::Value::Table(out)
                    };
                    return Ok(());
                }
            }
            for (k, v) in t.iter_mut() {
                resolve_csv(v, Some(k.as_str()), base)?;
            }
        }
        toml::Value::Array(items) => {
            for v in items {
                resolve_csv(v, key, base)?;
            }
        }
        _ => {}
    }
    Ok(())
}
