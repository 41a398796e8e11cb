//! Command-line analyzer over the fermionic-entanglement library:
//! state-file I/O, canned scenarios, analysis reports and certificate
//! verification.

pub mod commands;
pub mod report;
pub mod scenarios;
pub mod statefile;

use thiserror::Error;

/// CLI-level errors, split by exit-code class: input problems exit with 2,
/// numerical failures with 3. Physics verdicts are never errors.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn numerical(e: impl std::fmt::Display) -> Self {
        CliError::Numerical(e.to_string())
    }

    pub fn input_from(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}
