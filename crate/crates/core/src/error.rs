use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid exponent p = {0}")]
    InvalidExponent(f64),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("theta is not antisymmetric")]
    NotAntisymmetric,
    #[error("singular transform (|det T| = {0:e})")]
    SingularTransform(f64),
    #[error("vartheta must be nonzero for the matrix representation")]
    ZeroVartheta,
    #[error("truncation size {0} is below the minimum of 32")]
    TruncationTooSmall(usize),
    #[error("under-resolved grid: {0}")]
    UnderResolved(String),
    #[error("origin is not a grid node")]
    OriginNotNode,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("memory budget exceeded: {0}")]
    Budget(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
