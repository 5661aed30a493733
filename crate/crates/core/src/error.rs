use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error taxonomy shared by every module. The variants map onto the CLI
/// exit codes: parse errors exit 2, validation errors 3, usage errors 4,
/// undefined metrics 1.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text. `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Structurally well-formed input that violates a domain invariant.
    #[error("{0}")]
    Validation(String),

    /// Caller broke an API precondition (bad flag combination, mismatched
    /// argument lengths, ...).
    #[error("{0}")]
    Usage(String),

    /// Numerical failure while computing (zero-norm vector, NaN from the
    /// eigensolver, ...).
    #[error("{0}")]
    Computation(String),

    /// A metric's denominator is empty so the ratio is undefined.
    #[error("metric undefined: {0}")]
    Undefined(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Undefined(_) => 1,
            Error::Parse { .. } | Error::Io(_) => 2,
            Error::Validation(_) | Error::Computation(_) => 3,
            Error::Usage(_) => 4,
        }
    }
}
