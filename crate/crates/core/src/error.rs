use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0} (only 2 and 3 are supported)")]
    UnsupportedDimension(usize),
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("duplicate points at indices {0} and {1}")]
    DuplicatePoints(usize, usize),
    #[error("brute-force cap exceeded: {size} points > cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    /// A result that a theorem guarantees could not be produced.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
