use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("cannot normalize empty diagram")]
    EmptyDiagram,

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("negative entry {0} in Schur polynomial argument")]
    NegativeEntry(f64),

    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error("falsification: {0}")]
    Falsification(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("point is outside the hull")]
    OutsideHull,

    #[error("eigensolver failure: {0}")]
    Eigen(String),
}

pub type Result<T> = std::result::Result<T, Error>;
