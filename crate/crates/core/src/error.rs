use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed operator: {0}")]
    Malformed(String),
    #[error("matrix is not Hermitian (asymmetry {asymmetry:e} relative to norm {norm:e})")]
    NotHermitian { asymmetry: f64, norm: f64 },
    #[error("subspace already spans the whole space")]
    FullSpace,
    #[error("zero is not enclosed by the numerical range (distance {distance:e})")]
    ZeroNotEnclosed { distance: f64 },
    #[error("Crawford number is zero; the alternative characterization requires c(T) > 0")]
    CrawfordZero,
    #[error("vector is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },
    #[error("dimension {n} exceeds the limit {max} for this space")]
    DimensionTooLarge { n: usize, max: usize },
    #[error("polygon needs at least {min} vertices, got {got}")]
    PolygonTooSmall { got: usize, min: usize },
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch: {0}")]
    FieldMismatch(&'static str),
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("resolution must be at least 8, got {0}")]
    InvalidResolution(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
