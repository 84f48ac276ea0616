use thiserror::Error;

use crate::scheme::LinearScheme;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("regime error: {0}")]
    Regime(String),
    #[error("search capacity exceeded: {0}")]
    Capacity(String),
    #[error("construction fell short: {message}")]
    Construction {
        message: String,
        best: Option<Box<LinearScheme>>,
    },
    #[error("search budget exhausted: {message}")]
    Budget {
        message: String,
        partial: Box<LinearScheme>,
        rate: crate::rates::Rate,
    },
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
