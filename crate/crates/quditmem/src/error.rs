use std::path::PathBuf;

use thiserror::Error;

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status for IO failures.
pub const EXIT_IO: i32 = 1;
/// Exit status for invalid arguments or parameters.
pub const EXIT_INVALID: i32 = 2;
/// Exit status when a validation deviation exceeds its tolerance.
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] quditmem_core::Error),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed Schmidt file {path}: {source}")]
    SchmidtFile {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("cannot create {path}: {source}")]
    Create {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
    #[error("validation failed: max deviation {deviation:.3e} exceeds {tolerance:.1e}")]
    ValidationFailed { deviation: f64, tolerance: f64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Model(_) | CliError::SchmidtFile { .. } => EXIT_INVALID,
            CliError::ValidationFailed { .. } => EXIT_VALIDATION,
            CliError::Read { .. } | CliError::Create { .. } | CliError::Write(_) | CliError::ThreadPool(_) => EXIT_IO,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
