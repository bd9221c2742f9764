use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("invalid index set: {0}")]
    InvalidSupport(String),

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("columns {columns:?} are linearly dependent (column {dependent} lies in the span of the others)")]
    RankDeficient { columns: Vec<usize>, dependent: usize },

    #[error("sensing matrix fails validation: {0}")]
    InvalidMatrix(String),

    #[error("enumeration of {subsets} subsets exceeds the cap of {cap}; use a smaller instance or order")]
    EnumerationCap { subsets: u128, cap: u128 },

    #[error("matrix does not satisfy the RIP of order {order} (delta = {delta})")]
    RipViolated { order: usize, delta: f64 },

    #[error("Gram matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),

    #[error("hypothesis not met: delta_{order} = {delta} is not below the threshold {threshold}")]
    HypothesisNotMet { order: usize, delta: f64, threshold: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
