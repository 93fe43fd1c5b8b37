use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// The brute-force path enumerator ran past its caller-supplied budget.
    #[error("enumeration budget exceeded after {explored} partial paths")]
    BudgetExceeded { explored: usize },

    #[error("estimated work {estimate:.3e} exceeds the limit {limit:.3e}")]
    Guardrail { estimate: f64, limit: f64 },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
