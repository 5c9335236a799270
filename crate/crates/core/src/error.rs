use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("X and Z generators do not commute (X row {x_row}, Z row {z_row})")]
    NonCommuting { x_row: usize, z_row: usize },

    #[error("boundary maps do not compose to zero between positions {0} and {1}")]
    NotAComplex(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("nothing to split: generator {index} has weight {weight} < 4")]
    NothingToSplit { index: usize, weight: usize },

    #[error("no logical operators exist (K = 0)")]
    NoLogicals,

    #[error("enumeration budget exceeded: kernel dimension {dim} > budget {budget}")]
    BudgetExceeded { dim: usize, budget: usize },

    #[error("distances unavailable: {0}")]
    DistanceUnavailable(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Io(String),

    #[error("invalid code file field {field}: {message}")]
    Field { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
