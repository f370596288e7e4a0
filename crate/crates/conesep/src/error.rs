use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("unsupported scale: {0}")]
    UnsupportedScale(String),

    /// The Bishop-Phelps interior characterization needs `‖x*‖_* > α`.
    #[error("degenerate Bishop-Phelps cone: dual norm {dual_norm} does not exceed alpha {alpha}")]
    DegenerateCone { dual_norm: f64, alpha: f64 },

    /// Raised when a strictly positive pair is requested but the functional
    /// is not strictly positive on the base (the `0 ∈ cl S_K` obstruction).
    #[error("no strictly positive pair: base minimum {mu} is not positive")]
    NoPositivePair { mu: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("scene format error: {0}")]
    Format(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
