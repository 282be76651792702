use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cell id {0} is not part of the complex")]
    InvalidCell(usize),

    #[error("invalid face {face} for cell of dimension {dim}: {reason}")]
    InvalidFace {
        dim: usize,
        face: usize,
        reason: &'static str,
    },

    #[error("cells {a} and {b} have different dimensions ({dim_a} vs {dim_b})")]
    DimensionMismatch {
        a: usize,
        b: usize,
        dim_a: usize,
        dim_b: usize,
    },

    /// A weight appears as a divisor under a nonzero numerator but is not positive.
    #[error("cell {cell} has non-positive weight {weight} where it is used as a divisor")]
    ZeroDivisor { cell: usize, weight: f64 },

    /// A pixel, face or voxel weight that must be strictly positive is not.
    #[error("non-positive {what} weight {weight} at {location}")]
    NonPositiveWeight {
        what: &'static str,
        weight: f64,
        location: String,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed input at byte {offset}: {message}")]
    Format { offset: usize, message: String },

    #[error("unsupported format: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
