use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("incompatible expansions: {0}")]
    Incompatible(String),

    /// Malformed coefficient data; the message names the offending field.
    #[error("invalid data in field `{field}`: {message}")]
    InvalidData { field: String, message: String },

    /// Parameters violate the hypothesis of the multiplier theorem.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("usage error: {0}")]
    Usage(String),

    /// Two refinement levels (or a truncation bound) disagree beyond tolerance.
    #[error("accuracy error in {what}: coarse = {coarse:e}, fine = {fine:e}")]
    Accuracy { what: String, coarse: f64, fine: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidData {
            field: field.into(),
            message: message.into(),
        }
    }
}
