use thiserror::Error;

use crate::linalg::SignatureTriple;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is singular")]
    Singular,

    #[error("metric is not positive definite (leading minor {index} is {value})")]
    NotPositiveDefinite { index: usize, value: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("Jacobi identity fails on (e{0}, e{1}, e{2})")]
    Jacobi(usize, usize, usize),

    #[error("algebra is not nilpotent")]
    NotNilpotent,

    #[error("block pattern violated: {0}")]
    BlockPattern(String),

    #[error("basis is not nice: {0}")]
    NotNice(String),

    #[error("basis frame: {0}")]
    Frame(String),

    #[error("seed must be strictly positive (component {0})")]
    NonPositiveSeed(usize),

    #[error("signature {target} is not in Sign(g)")]
    NotInSignSet { target: SignatureTriple },

    #[error("Newton iteration failed: {0}")]
    Newton(String),

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("unknown catalog id `{0}`")]
    UnknownId(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::BlockPattern(_) | Error::Internal(_))
    }
}
