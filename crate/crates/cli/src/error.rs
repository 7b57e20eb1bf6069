//! Top-level error classification driving the process exit code.

use crate::dataset::DataError;
use crate::netfile::FileError;
use crate::sample::SampleError;
use crate::shape::ParseShapeError;
use crate::train::TrainError;
use mlpalg_core::{AlgebraError, MlpError};
use std::fmt;

/// Command failure, classified by the exit code it maps to: usage errors
/// exit 1, validation errors 2, numeric failures 3 (success is 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed invocation: unknown flags, unparseable specs, bad arity.
    Usage(String),
    /// Well-formed request that violates a precondition or refers to
    /// unreadable/invalid files.
    Validation(String),
    /// Numeric failure at run time: divergence, degenerate sampling.
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Validation(msg) | CliError::Numeric(msg) => {
                f.write_str(msg)
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<ParseShapeError> for CliError {
    fn from(e: ParseShapeError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SampleError> for CliError {
    fn from(e: SampleError) -> Self {
        match e {
            SampleError::AcceptanceRateTooLow { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<TrainError> for CliError {
    fn from(e: TrainError) -> Self {
        match e {
            TrainError::Diverged { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<MlpError> for CliError {
    fn from(e: MlpError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<crate::eval::EvalError> for CliError {
    fn from(e: crate::eval::EvalError) -> Self {
        CliError::Validation(e.to_string())
    }
}
