use thiserror::Error;

/// Errors raised by the calculus modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A precondition on the arguments was violated.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The word contains a left-handed twist, which Legendrian surgery cannot produce.
    #[error("not realizable by Legendrian surgery: {0}")]
    NotRealizable(String),

    #[error("undecidable: {0}")]
    Undecidable(String),

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("malformed input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
