use thiserror::Error;

/// Errors raised by the numerics in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("weight form is not positive definite (smallest eigenvalue {eigenvalue:.3e}); quadrature refused")]
    DegenerateWeight { eigenvalue: f64 },

    #[error("coefficient vector violates interior margin {margin} (index {index:?}, box N = {big_n})")]
    MarginViolation {
        margin: usize,
        index: Vec<usize>,
        big_n: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operators live on different truncation boxes")]
    BasisMismatch,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("integral does not converge: {0}")]
    NonConvergent(String),

    #[error("singular point: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, FockError>;
