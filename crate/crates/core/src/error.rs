use thiserror::Error;

/// Errors produced by the geometric routines and theorem pipelines.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate hull: affine dimension {dim}")]
    DegenerateHull { dim: usize },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("optimizer failed: {0}")]
    OptimizerFailed(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("search exhausted after {samples} samples")]
    SearchExhausted { samples: usize },
    #[error("too few bodies: need at least {need}, got {got}")]
    TooFewBodies { need: usize, got: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("points are not in general position: {0}")]
    DegeneratePosition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("halving degenerate: {0}")]
    HalvingDegenerate(String),
}

pub type Result<T, E = GeomError> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> GeomError {
    GeomError::InvalidInput(msg.into())
}
