use mingraph_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_ASSERTION: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("check failed: {}", .0.join("; "))]
    Assertion(Vec<String>),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => EXIT_CONFIG,
            CliError::Assertion(_) => EXIT_ASSERTION,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter { .. }
            | CoreError::InvalidCurve(_)
            | CoreError::Parse { .. }
            | CoreError::GridMismatch
            | CoreError::DegenerateSeed
            | CoreError::Io(_) => CliError::Config(e.to_string()),
            CoreError::ContractionFailure { .. } => CliError::Numerical(e.to_string()),
            CoreError::NonFinite { .. }
            | CoreError::IllConditionedFit { .. }
            | CoreError::SolverStall { .. }
            | CoreError::DegenerateLevelSet { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
