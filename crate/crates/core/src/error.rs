use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Fock dimension {0}: at least 2 levels are required")]
    InvalidDimension(usize),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("truncation overflow: tail weight {tail:.3e} exceeds tolerance {tol:.1e} at dim {dim}; need dim >= {required_dim}")]
    TruncationOverflow {
        dim: usize,
        tail: f64,
        tol: f64,
        required_dim: usize,
    },

    #[error("unphysical parameters: {0}")]
    UnphysicalParameters(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("phase unwrap failed at sample {index}: step {step:.3} rad exceeds limit {limit:.3} rad")]
    UnwrapFailure { index: usize, step: f64, limit: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("entanglement witness requires a pure motional preparation")]
    InvalidWitnessInput,

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("nonpositive metric {0:e} in scaling test")]
    NonpositiveMetric(f64),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// Numeric failures (truncation, unwrapping) as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::TruncationOverflow { .. } | Error::UnwrapFailure { .. }
        )
    }
}
