use lgt_core::IntegrateError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("scenario error: {0}")]
    Schema(String),
    #[error("{0}")]
    Inconsistent(String),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Stable process exit codes.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Inconsistent(_) => 3,
            CliError::Integration(_) => 4,
            CliError::Io { .. } => 1,
        }
    }

    pub fn schema(path: &str, msg: impl std::fmt::Display) -> Self {
        CliError::Schema(format!("{path}: {msg}"))
    }
}

impl From<IntegrateError> for CliError {
    fn from(e: IntegrateError) -> Self {
        match e {
            IntegrateError::InconsistentInitialState { .. } => CliError::Inconsistent(e.to_string()),
            IntegrateError::Config(msg) => CliError::Schema(format!("integrator: {msg}")),
            other => CliError::Integration(other.to_string()),
        }
    }
}
