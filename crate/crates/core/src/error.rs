use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not positive definite (pivot {pivot} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("local scale of point {index} is zero (duplicate points)")]
    DegenerateScale { index: usize },

    #[error("vertex {index} has zero degree")]
    IsolatedVertex { index: usize },

    #[error("invalid cluster count k = {k} for n = {n}")]
    InvalidK { k: usize, n: usize },

    #[error("label vectors differ in length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("too many distinct labels ({0}); at most 64 are supported")]
    TooManyLabels(usize),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dims(rows: usize, cols: usize) -> String {
    format!("{rows}x{cols}")
}
