//! Error taxonomy mapped onto the process exit contract.

use std::process::ExitCode;

/// Exit status when every enforced check passed.
pub const EXIT_OK: u8 = 0;
/// Exit status when at least one enforced check failed.
pub const EXIT_CHECK_FAILED: u8 = 1;
/// Exit status for input problems: unreadable or schema-invalid scenario
/// files, unknown check ids, unusable grid lists.
pub const EXIT_INPUT: u8 = 2;
/// Exit status for numerical or environmental capability failures.
pub const EXIT_CAPABILITY: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The input could not be used; carries a human-readable diagnostic.
    #[error("{0}")]
    Input(String),
    /// The numerical engine could not complete the computation.
    #[error("numerical failure: {0}")]
    Numeric(#[from] ogt_core::Error),
    /// The environment failed us (I/O, filesystem).
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            Self::Input(_) => ExitCode::from(EXIT_INPUT),
            Self::Numeric(_) | Self::Io(_) => ExitCode::from(EXIT_CAPABILITY),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
