use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {op} on {left_rows}x{left_cols} and {right_rows}x{right_cols}")]
    Shape {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid matrix data: {0}")]
    InvalidMatrix(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("too large for exact oracle: {needed} monomials exceeds budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("unsupported by exact oracle: {0}")]
    OracleUnsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
