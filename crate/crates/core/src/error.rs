use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parameter `{name}` = {value} outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("matrix has eigenvalue {eigenvalue:e} below -{tol:e}; not positive semidefinite")]
    NotPositive { eigenvalue: f64, tol: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace {trace} differs from 1")]
    NotUnitTrace { trace: f64 },

    #[error("vector norm {norm} differs from 1")]
    NotNormalized { norm: f64 },

    #[error("matrix is not an isometry (max deviation of J^dag J from identity {deviation:e})")]
    NotIsometry { deviation: f64 },

    #[error("matrix has a non-finite entry")]
    NonFinite,

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("invalid epsilon grid: {0}")]
    InvalidGrid(String),

    #[error("malformed isometry document: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
