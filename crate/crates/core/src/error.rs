use thiserror::Error;

/// Errors produced by the library.
///
/// `InvalidArgument` covers domain violations (out-of-range vertex ids,
/// incompatible orientations, preconditions not met). `Parse` carries the
/// 1-based line number of the offending line in a text input. `BudgetExhausted`
/// is the distinguished "undecided" outcome of a bounded search: the caller's
/// node budget ran out before the search either found a witness or exhausted
/// the space.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("search budget exhausted after {nodes} nodes: undecided")]
    BudgetExhausted { nodes: u64 },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
