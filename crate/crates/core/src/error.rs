use alloc::string::String;

/// Errors raised by the engine.
///
/// The variants line up with the CLI exit codes: `InvalidInput` is a usage
/// error, `ResourceLimit` and `Overflow` are resource failures, and the rest
/// indicate a failed verification.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource limit: {what} ({detail}) exceeds bound {bound}")]
    ResourceLimit {
        what: String,
        detail: String,
        bound: usize,
    },

    #[error("torsion error: {context} (elementary divisor {divisor})")]
    Torsion { context: String, divisor: i64 },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("lemma violation: {0}")]
    LemmaViolation(String),

    #[error("integer overflow during exact arithmetic")]
    Overflow,
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn construction(msg: impl Into<String>) -> Error {
    Error::Construction(msg.into())
}
