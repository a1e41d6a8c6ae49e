use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("singular expansion point {point}: entry ({row}, {col}) has a pole there")]
    SingularPoint { point: String, row: usize, col: usize },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("assumption violated: {0}")]
    Assumption(String),
    #[error("certificate failure: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
