use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },

    #[error("word is not a codeword of {0}")]
    NotACodeword(String),

    #[error("{what}: required {required} exceeds cap {cap}")]
    CapExceeded {
        what: String,
        required: u128,
        cap: u128,
    },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("oracle contract violated: {0}")]
    OracleContract(String),

    #[error("unsupported metric: {0}")]
    UnsupportedMetric(String),

    #[error("resampling budget exhausted after {0} attempts")]
    BudgetExhausted(usize),
}

impl Error {
    pub fn cap(what: impl Into<String>, required: u128, cap: u128) -> Self {
        Error::CapExceeded {
            what: what.into(),
            required,
            cap,
        }
    }

    pub fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
