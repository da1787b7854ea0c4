use thiserror::Error;

/// Errors raised by the core model layer.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("no block-library entry for instruction kind `{0}`")]
    MissingBlockEntry(String),

    #[error("slot {slot}: instructions overlap on qubit {qubit}")]
    OverlapViolation { slot: u32, qubit: u32 },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("parse error in {context}: {message}")]
    ParseError { context: String, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CoreError {
    pub fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        CoreError::ParseError {
            context: context.into(),
            message: message.into(),
        }
    }

    pub fn invariant(message: impl Into<String>) -> Self {
        CoreError::InvariantViolation(message.into())
    }
}
