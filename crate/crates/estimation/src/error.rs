use sigproc::SigError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstError {
    #[error("ill-conditioned regression (condition number {cond:.3e}); nearly collinear columns `{a}` and `{b}`")]
    IllConditioned { cond: f64, a: String, b: String },

    #[error("no motion detected: {0}")]
    NoMotion(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("missing records: {0}")]
    Missing(String),

    #[error("measurement oracle failed: {0}")]
    Oracle(String),

    #[error(transparent)]
    Signal(#[from] SigError),
}

pub type Result<T> = std::result::Result<T, EstError>;
