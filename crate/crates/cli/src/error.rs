use std::path::PathBuf;

use thiserror::Error;
use warpstab_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config {path}: {msg}")]
    Config { path: PathBuf, msg: String },

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// Process exit code: 1 for bad input or unwritable output, 2 when a
    /// hypothesis check fails outright, 5 for domain and numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } => 1,
            CliError::Core(e) => match e {
                CoreError::InvalidParameters(_)
                | CoreError::NuOutOfRange(_)
                | CoreError::YOutOfRange(_)
                | CoreError::ZeroA
                | CoreError::NegativeNorm
                | CoreError::OrderTooSmall(_)
                | CoreError::ModelNotDssOrRn => 1,
                CoreError::HypothesisViolated(_) | CoreError::CasePreconditionViolated { .. } => 2,
                _ => 5,
            },
            CliError::Io { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
