use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad arguments: mismatched systems, empty windows, non-positive scales.
    #[error("usage error: {0}")]
    Usage(String),

    /// The instance is valid but no exact oracle exists for it.
    #[error("unsupported instance: {0}")]
    Unsupported(String),

    /// A documented hypothesis of an operation does not hold.
    #[error("precondition `{clause}` violated: {detail}")]
    Precondition { clause: String, detail: String },

    /// A checked inequality or set-algebra postcondition failed.
    #[error("property violated: {0}")]
    Property(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn precondition(clause: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Precondition {
            clause: clause.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
