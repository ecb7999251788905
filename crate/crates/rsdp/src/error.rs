//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates a precondition (off-simplex weights, beta = 0
    /// where exponential utility is undefined, malformed specs, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A computation left the representable floating-point range.
    #[error("numeric range error: {0}")]
    NumericRange(String),

    /// A return-distribution support grew past the configured cap.
    /// Carries the (h, s, a) triple that blew up, 1-based in h.
    #[error("support cap exceeded at (h={h}, s={s}, a={a}): {atoms} atoms > cap {cap}")]
    Capacity {
        h: usize,
        s: usize,
        a: usize,
        atoms: usize,
        cap: usize,
    },

    /// Input files that fail schema or invariant checks.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },

    /// Wraps another error with run context (algorithm, seed, episode).
    #[error("{context}: {source}")]
    WithContext {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// CLI exit code: 1 for bad inputs, 2 for runtime/capacity failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) | Error::Validation(_) | Error::Parse { .. } => 1,
            Error::NumericRange(_) | Error::Capacity { .. } | Error::Io { .. } => 2,
            Error::WithContext { source, .. } => source.exit_code(),
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn with_context(self, context: impl Into<String>) -> Self {
        Error::WithContext {
            context: context.into(),
            source: Box::new(self),
        }
    }
}
