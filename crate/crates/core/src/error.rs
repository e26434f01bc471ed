use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error("shape mismatch: expected length {expected}, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("entry {value} out of range for modulus {p}")]
    OutOfRange { value: u64, p: u64 },

    #[error("{what} needs {needed} entries, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("class has {size} functions, cap is {cap}")]
    ClassTooLarge { size: usize, cap: usize },

    #[error("protocol violation in round {round}: {reason}")]
    ProtocolViolation { round: usize, reason: String },

    #[error("round {round}: {detail}")]
    BoundViolated { round: usize, detail: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
