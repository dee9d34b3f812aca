use thiserror::Error;

/// Crate-wide error type.
///
/// Variants map onto the two CLI failure classes: configuration problems
/// (bad scheme names, malformed config files, invalid parameters) exit with
/// code 2, everything else (pipeline, I/O, measurement) with code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("encoding error: {0}")]
    Encoding(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("framing error: {0}")]
    Framing(String),
    #[error("processing error: {0}")]
    Processing(String),
    #[error("agc error: {0}")]
    Agc(String),
    #[error("synchronization failed: {0}")]
    SyncFailure(String),
    #[error("measurement error: {0}")]
    Measurement(String),
    #[error("decode error: {0}")]
    Decode(String),
    #[error("distance undefined: {0}")]
    UndefinedDistance(String),
    #[error("image format error: {0}")]
    ImageFormat(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit code class for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
