use quantsel::GeomError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("malformed JSON: {0}")]
    Parse(serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("verification failed: {0}")]
    Verify(String),
}

impl HarnessError {
    /// 0 success, 2 no witness found, 3 verification failure, 4 invalid input.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Verify(_) => 3,
            HarnessError::Geom(
                GeomError::NotFound(_)
                | GeomError::SearchExhausted { .. }
                | GeomError::OptimizerFailed(_)
                | GeomError::HalvingDegenerate(_)
                | GeomError::DegenerateHull { .. },
            ) => 2,
            _ => 4,
        }
    }
}

pub(crate) fn fail(msg: impl Into<String>) -> HarnessError {
    HarnessError::Verify(msg.into())
}
