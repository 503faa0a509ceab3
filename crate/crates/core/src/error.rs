use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("verification failed: {what}; witness: {witness}")]
    Verification { what: String, witness: String },
    #[error("no solution for {context}; witness: {witness}")]
    NoSolution { context: String, witness: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub(crate) fn verification(what: impl Into<String>, witness: impl Into<String>) -> Error {
    Error::Verification {
        what: what.into(),
        witness: witness.into(),
    }
}
