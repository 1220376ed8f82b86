use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates the mathematical precondition of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A state file could not be read.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A specifier string (channel, state, config) is malformed.
    #[error("invalid specifier `{input}`: {msg}")]
    Spec { input: String, msg: String },

    /// The optimizer or an eigensolve produced a non-finite value.
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn spec_err<T>(input: &str, msg: impl Into<String>) -> Result<T> {
    Err(Error::Spec {
        input: input.to_string(),
        msg: msg.into(),
    })
}
