use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by parsing, graph operations, and scoring.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text; `line` is 1-based.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("lattice contains a cycle")]
    Cycle,

    #[error("lattice is not connected ({msg}); run connect first")]
    Disconnected { msg: String },

    #[error("network contains nested alternatives; run flatten_nested_alts first")]
    NestedAlternatives,

    #[error("{0}")]
    InvalidArgument(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    /// Violated internal invariant. Maps to CLI exit code 2.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
