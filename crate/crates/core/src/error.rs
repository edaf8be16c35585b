use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("channel {index} out of range [0, 1]: {value}")]
    OutOfRange { index: usize, value: f64 },

    #[error("empty channel vector")]
    Empty,

    #[error("expected {expected} channels, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("{n} channels exceeds the supported maximum of {max}")]
    TooManyChannels { n: usize, max: usize },

    #[error("{0}")]
    Domain(String),

    #[error("inconsistent opponent triple: {0}")]
    Inconsistent(String),

    #[error("curve index {index} out of range for {len} curves")]
    CurveIndex { index: usize, len: usize },

    #[error("invalid curve data: {0}")]
    Curve(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
