//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("trace kernel needs 2^n basis evolutions; n = {n} exceeds cap {cap}")]
    TraceCapExceeded { n: usize, cap: usize },

    #[error("linear system singular or not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    SingularSystem { min_eigenvalue: f64 },

    #[error("optimizer did not converge after {iterations} iterations (max KKT violation {max_violation:e})")]
    NonConvergence {
        iterations: usize,
        max_violation: f64,
    },

    #[error("non-uniform sample grid: {0}")]
    NonUniformGrid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
