use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("singular basis: gram determinant is {0} (columns are linearly dependent)")]
    SingularBasis(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty basis: dimension must be at least 1")]
    EmptyBasis,

    #[error("enumeration budget exceeded after {nodes} nodes (cap {cap})")]
    BudgetExceeded { nodes: u64, cap: u64 },

    #[error("brute-force oracle limited to dimension {max}, got {got}")]
    DimensionTooLarge { max: usize, got: usize },

    #[error("tolerance {rel_tol:e} unreachable: {reason}")]
    ToleranceUnreachable { rel_tol: f64, reason: String },

    #[error("basis reduction unstable: {0}")]
    ReductionUnstable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("lattice file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, LatticeError>;
