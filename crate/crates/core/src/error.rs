use thiserror::Error;

/// Errors raised by the engine.
///
/// `Invariant` is reserved for internal consistency failures (a Fermat
/// membership check failing, a factorization that does not multiply back);
/// the CLI maps it to exit code 2. Everything else is an input or domain
/// problem.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("root {root} is not simple modulo {p}")]
    NotSimpleRoot { root: String, p: u64 },

    #[error("polynomial {0} is reducible over the rationals")]
    Reducible(String),

    #[error("splitting of {p} undetermined: {reason}")]
    SplittingUndetermined { p: u64, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("record {label}: {message}")]
    Validation { label: String, message: String },

    #[error("precision {precision} too low to decide")]
    PrecisionTooLow { precision: u32 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
