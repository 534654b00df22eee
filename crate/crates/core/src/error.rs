use alloc::boxed::Box;
use alloc::string::String;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("sampling rate mismatch: {0} Hz vs {1} Hz")]
    RateMismatch(u32, u32),

    #[error("input too short: need more than {needed} samples, have {actual}")]
    TooShort { needed: usize, actual: usize },

    #[error("signal has zero dynamic range")]
    ZeroRange,

    #[error("{0} has zero power")]
    ZeroPower(&'static str),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("decomposition depth {levels} is too deep for {len} samples")]
    TooDeep { levels: usize, len: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("duplicate record id `{0}`")]
    DuplicateRecord(String),

    #[error("record `{0}` was part of the training data")]
    Leakage(String),

    #[error("{rate_bpm} bpm would push beat content ({bandwidth_hz:.1} Hz) past the Nyquist rate")]
    Aliasing { rate_bpm: f64, bandwidth_hz: f64 },

    #[error("sweep cell {cell} failed: {source}")]
    SweepCell { cell: usize, source: Box<Error> },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
