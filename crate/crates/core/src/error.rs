use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dataset needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("coordinate {coord} of point {index} is not finite")]
    NonFinite { index: usize, coord: usize },

    #[error("points {0} and {1} coincide; distances between distinct elements must be positive")]
    CoincidentPoints(usize, usize),

    #[error("distance matrix must be square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partition covers {partition} elements but dataset has {dataset}")]
    CoverageMismatch { partition: usize, dataset: usize },

    #[error(
        "refusing to enumerate partitions of {n} elements: cap is {cap} (Bell({n}) partitions); \
         raise the cap with AXIOMLAB_ENUM_CAP if you really mean it"
    )]
    EnumerationCap { n: usize, cap: usize },

    #[error("invalid cluster count k={k} for n={n}")]
    InvalidK { k: usize, n: usize },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("stream ended after {got} points, need at least {need}")]
    StreamTooShort { got: usize, need: usize },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
