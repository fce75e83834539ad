use thiserror::Error;

/// Errors raised by the simulator, the bit pipeline and the test battery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid OU configuration: {0}")]
    InvalidOu(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("bit index {index} out of range for {n} noise-bits")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("bit string has {got} bits, system has {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("input too short: need at least {required} bits, got {got}")]
    TooShort { required: usize, got: usize },

    #[error("precondition failed for {test}: {reason}")]
    Precondition { test: &'static str, reason: String },

    #[error("operation requires a product-form state")]
    NotProductForm,

    #[error("state-vector oracle limited to {max} bits, requested {requested}")]
    TooManyBits { max: usize, requested: usize },

    #[error("unknown gate `{0}`")]
    UnknownGate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
