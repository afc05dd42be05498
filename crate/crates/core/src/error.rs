use thiserror::Error;

/// Errors raised by the identification pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown system `{0}`")]
    UnknownSystem(String),

    #[error("parameter `{name}` must be finite, got {value}")]
    NonFiniteParameter { name: String, value: f64 },

    #[error("unknown parameter `{param}` for system `{system}`")]
    UnknownParameter { system: String, param: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("trajectory diverged at t = {time} s")]
    Diverged { time: f64 },

    #[error("signal too short: need at least {min} samples, got {got}")]
    TooShort { min: usize, got: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("dictionary mismatch between coefficient matrices")]
    SpecMismatch,

    #[error("true coefficient matrix is identically zero")]
    ZeroReference,

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
