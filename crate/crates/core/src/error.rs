use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("window too small: need {needed}, window holds {available}")]
    WindowTooSmall { needed: u64, available: u64 },

    #[error("index out of domain: {0}")]
    IndexOutOfDomain(String),

    #[error("truncation leakage: mass would leave index range at step {step}")]
    TruncationLeakage { step: usize },

    #[error("not C1 at x = {at}: value jump {value_jump:e}, derivative jump {derivative_jump:e}")]
    NotC1 {
        at: f64,
        value_jump: f64,
        derivative_jump: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("dimension mismatch: {0}")]
    Mismatch(String),

    #[error("unknown family test `{0}`")]
    UnknownFamily(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
