use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("shape mismatch: expected {expected} samples, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("multiplier is non-finite at frequency ({}, {}, {})", xi[0], xi[1], xi[2])]
    NonFiniteMultiplier { xi: [f64; 3] },

    #[error("unsupported index: {0}")]
    UnsupportedIndex(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("bad field file: {0}")]
    Format(String),
}
