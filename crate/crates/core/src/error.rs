use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid encoding parameters (n={n}, m={m}, j={j}): {reason}")]
    InvalidEncoding {
        n: usize,
        m: usize,
        j: usize,
        reason: &'static str,
    },
    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("usage error: {0}")]
    Usage(String),
    #[error("letter vote over {0} blocks exceeds the exact-summation cap of {1}")]
    TooManyBlocks(usize, usize),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("fusion cannot succeed at eta = 1")]
    InfiniteCost,
    #[error("no threshold: {0}")]
    NoThreshold(String),
    #[error("decoding failed: {0}")]
    DecodeFailure(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfRange { name, value })
    }
}
