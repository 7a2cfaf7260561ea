use thiserror::Error;

/// Errors raised by the library. Every fallible public operation returns one of these.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BohrError {
    /// An argument outside the operation's domain (n = 0, a pole, zero samples, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A character point has fewer coordinates than the primes an index needs.
    #[error("character point has {len} coordinates but prime {prime} needs coordinate {needed}")]
    Coverage { prime: u64, needed: usize, len: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl BohrError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        BohrError::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        BohrError::Parse {
            line,
            message: msg.into(),
        }
    }
}

impl From<std::io::Error> for BohrError {
    fn from(e: std::io::Error) -> Self {
        BohrError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, BohrError>;
