use std::path::PathBuf;

/// Errors of the command-line front end.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("config: {0}")]
    Config(String),
    #[error("unknown suite `{0}` (expected one of: {list})", list = crate::suites::SUITE_NAMES.join(", "))]
    UnknownSuite(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] idt_core::Error),
}

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for configuration and usage problems, which is every error this type carries;
    /// verification mismatches are reported through [`crate::suites::SuiteReport`].
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type AppResult<T> = Result<T, AppError>;
