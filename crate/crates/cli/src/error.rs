use estimation::EstError;
use hybrid_sim::SimError;
use synth_lab::LabError;
use thiserror::Error;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable, malformed or schema-violating input.
    #[error("{0}")]
    Input(String),
    #[error("simulation failed: {0}")]
    Simulation(String),
    #[error("missing records: {0}")]
    MissingRecords(String),
    #[error("{0}")]
    IllConditioned(String),
    #[error("estimation failed: {0}")]
    Estimation(String),
    #[error("cannot write {path}: {msg}")]
    Output { path: String, msg: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Output { .. } => 1,
            CliError::Simulation(_) | CliError::Estimation(_) => 2,
            CliError::MissingRecords(_) => 3,
            CliError::IllConditioned(_) => 4,
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Config(_) | SimError::Core(_) => CliError::Input(e.to_string()),
            other => CliError::Simulation(other.to_string()),
        }
    }
}

impl From<EstError> for CliError {
    fn from(e: EstError) -> Self {
        match e {
            EstError::Missing(m) => CliError::MissingRecords(m),
            e @ EstError::IllConditioned { .. } => CliError::IllConditioned(e.to_string()),
            other => CliError::Estimation(other.to_string()),
        }
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Sim(s) => CliError::Simulation(s.to_string()),
            LabError::Estimation(e) => e.into(),
            LabError::Invalid(m) => CliError::Input(m),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
