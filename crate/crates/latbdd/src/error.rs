//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {context} (expected {expected}, got {got})")]
    ShapeMismatch {
        context: &'static str,
        expected: String,
        got: String,
    },

    #[error("non-finite entry at index {index} in {context}")]
    NonFinite { context: &'static str, index: usize },

    #[error("SVD did not converge within {sweeps} Jacobi sweeps")]
    SvdNonConvergence { sweeps: usize },

    #[error("rank-deficient matrix: sigma_min = {sigma_min:e} with sigma_max = {sigma_max:e}")]
    RankDeficient { sigma_min: f64, sigma_max: f64 },

    #[error("search box too large: {cells} cells exceeds the {limit} guard")]
    BoxTooLarge { cells: u128, limit: u128 },

    #[error("truth-table SAT limited to {limit} variables, formula has {vars}")]
    TooManyVariables { vars: usize, limit: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
