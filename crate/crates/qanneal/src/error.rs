use std::io;
use std::path::Path;

use qanneal_core::{IlpError, OracleError, PipelineError, ScheduleError, SimError};
use thiserror::Error;

/// Every failure the command line can report, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Bound(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Bound(_) => 4,
            CliError::Numerical(_) => 5,
            CliError::Check(_) => 1,
        }
    }

    pub fn io(path: &Path, err: io::Error) -> Self {
        CliError::Input(format!("{}: {err}", path.display()))
    }
}

impl From<IlpError> for CliError {
    fn from(e: IlpError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            OracleError::NoFeasiblePoint => CliError::Input(e.to_string()),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Ilp(e) => e.into(),
            PipelineError::Oracle(e) => e.into(),
        }
    }
}

impl From<ScheduleError> for CliError {
    fn from(e: ScheduleError) -> Self {
        match e {
            ScheduleError::OffsetOutOfBounds { .. } | ScheduleError::PositiveOffset(_) | ScheduleError::BadFraction(_) => {
                CliError::Bound(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Schedule(e) => e.into(),
            SimError::TooManyQubits(..) => CliError::Cap(e.to_string()),
            SimError::Parameter(_) => CliError::Bound(e.to_string()),
            SimError::Dimension(_) => CliError::Input(e.to_string()),
            SimError::NegativeAmplitude(_)
            | SimError::TraceDrift { .. }
            | SimError::Negativity { .. }
            | SimError::Hermiticity { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
