use estimation::EstError;
use hybrid_sim::SimError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Estimation(#[from] EstError),
    #[error("invalid experiment: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
