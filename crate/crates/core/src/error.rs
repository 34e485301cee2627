use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates a documented precondition or type invariant.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A serialized document could not be read.
    #[error("parse error: {0}")]
    Parse(String),

    /// The Monte Carlo budget is below what the estimator needs.
    #[error("insufficient samples: {required} conditioning samples required, {given} given")]
    InsufficientSamples { required: u64, given: u64 },

    /// The operation is not defined for this kind of model.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An estimator produced an unusable intermediate value.
    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
