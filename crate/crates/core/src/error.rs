use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("field is not finite at node {node}")]
    NonFinite { node: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("ill-conditioned Cauchy fit (condition estimate {condition:.3e})")]
    IllConditionedFit { condition: f64 },

    #[error("linear solver stalled after {iterations} iterations (relative residual {residual:.3e})")]
    SolverStall { iterations: usize, residual: f64 },

    #[error("seed has zero C2 norm")]
    DegenerateSeed,

    #[error("Picard contraction failed at iteration {iteration}: {reason}")]
    ContractionFailure { iteration: usize, reason: String },

    #[error("degenerate level set: field vanishes on the whole cell at lattice ({i}, {j}); shift the grid")]
    DegenerateLevelSet { i: usize, j: usize },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
