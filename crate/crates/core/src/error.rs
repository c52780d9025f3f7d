use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("probability {value} at index {index} is outside [0, 1]")]
    Range { index: usize, value: f64 },
    #[error("{what} is {got}, above the limit of {limit}")]
    Capacity {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("invalid data: {0}")]
    Data(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}
