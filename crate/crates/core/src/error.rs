use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown geometry code `{0}`")]
    UnknownGeometry(String),
    #[error("zero-length bond vector at index {0}")]
    ZeroLengthBond(usize),
    #[error("at least {required} vertices are required, got {got}")]
    TooFewVertices { required: usize, got: usize },
    #[error("angle {0} is outside (0, 180]")]
    AngleOutOfRange(f64),
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("min_pts must be at least 1")]
    InvalidMinPts,
    #[error("angle pool is empty")]
    EmptyPool,
    #[error("invalid particle descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("at least one particle descriptor is required")]
    EmptyDescriptors,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cutoff {cutoff} exceeds half the minimum box width {half_width}")]
    CutoffTooLarge { cutoff: f64, half_width: f64 },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
