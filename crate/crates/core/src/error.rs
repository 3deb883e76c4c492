use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spin: twice-j must be a positive integer, got {0}")]
    InvalidSpin(i64),

    #[error("Fock cutoff must be at least 1, got {0}")]
    InvalidCutoff(usize),

    #[error("ordering parameter s = {0} lies outside [-1, 1]")]
    SOutOfRange(f64),

    #[error("harmonic index (L={l}, M={m}) out of range for 2j = {twice_j}")]
    HarmonicIndex { l: i64, m: i64, twice_j: u32 },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("system mismatch: {0}")]
    SystemMismatch(String),

    #[error("numerical check failed: {0}")]
    Numerical(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid state specification: {0}")]
    InvalidState(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
