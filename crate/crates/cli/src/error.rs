use std::io;

use lowdisc::{AlphaError, DiscrepancyError, NumerationError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("inadmissible sequence: {0}")]
    Inadmissible(AlphaError),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Inadmissible(_) => 3,
            CliError::Construction(_) => 4,
            CliError::Verification(_) => 5,
        }
    }
}

impl From<AlphaError> for CliError {
    fn from(e: AlphaError) -> Self {
        match e {
            AlphaError::Inadmissible { .. }
            | AlphaError::NotIncreasing { .. }
            | AlphaError::DeclaredKappaTooLarge { .. }
            | AlphaError::NonPositiveKappa => CliError::Inadmissible(e),
            AlphaError::EmptyPrefix | AlphaError::NonPositiveConstant => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Construction(other.to_string()),
        }
    }
}

impl From<DiscrepancyError> for CliError {
    fn from(e: DiscrepancyError) -> Self {
        match e {
            DiscrepancyError::Alpha(a) => a.into(),
            DiscrepancyError::BeyondStage { .. } => CliError::Usage(e.to_string()),
            other => CliError::Construction(other.to_string()),
        }
    }
}

impl From<NumerationError> for CliError {
    fn from(e: NumerationError) -> Self {
        CliError::Usage(e.to_string())
    }
}
