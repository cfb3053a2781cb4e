use std::path::PathBuf;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config field `rho`: {0} is outside [0, 1]")]
    RhoOutOfRange(f64),
    #[error("invalid config field `alpha`: {0} is below 1")]
    AlphaTooSmall(f64),
    #[error("invalid config field `{field}`: power {value} is negative")]
    NegativePower { field: &'static str, value: f64 },
    #[error("invalid config field `nodes`: `{a}` and `{b}` share a position")]
    CoincidentNodes { a: String, b: String },
    #[error("invalid config field `{field}`: {reason}")]
    InvalidField { field: String, reason: String },
    #[error("cannot parse config {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] relaycap_core::Error),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn field(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::InvalidField {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// 3 for file-system failures, 2 for everything the user can fix in the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Write { .. } => 3,
            _ => 2,
        }
    }
}
