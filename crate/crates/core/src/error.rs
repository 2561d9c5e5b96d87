use thiserror::Error;

/// Errors produced anywhere in the bench.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Operand shapes do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A linear system had a pivot below the singularity threshold.
    #[error("singular matrix (pivot {pivot:e} below threshold)")]
    Singular { pivot: f64 },

    /// The Riccati iteration ran out of budget or found no stabilizing seed.
    #[error("Riccati solver failed after {iterations} iterations (best residual {best_residual:e}): {reason}")]
    SolverFailure {
        iterations: usize,
        best_residual: f64,
        reason: String,
    },

    /// Malformed text input (rule-base or trajectory file).
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
