use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("walk cannot start at node {0}: it has degree 0")]
    IsolatedStart(usize),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("degenerate degree statistics: average degree {avg} must exceed minimum degree {min}")]
    DegenerateDegrees { min: f64, avg: f64 },

    #[error("singular parameters: {0}")]
    Singularity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    #[error("unsupported cache format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
