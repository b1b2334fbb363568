use std::process::ExitCode;

use ptwitness_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("schema: {0}")]
    Schema(String),
    #[error("capacity: {0}")]
    Capacity(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Schema(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Internal(_) => 4,
        })
    }

    /// Prefixes the message with the scenario location it came from.
    pub fn context(self, at: &str) -> Self {
        match self {
            CliError::Schema(m) => CliError::Schema(format!("{at}: {m}")),
            CliError::Capacity(m) => CliError::Capacity(format!("{at}: {m}")),
            CliError::Internal(m) => CliError::Internal(format!("{at}: {m}")),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Capacity(_) => CliError::Capacity(e.to_string()),
            CoreError::Contract(_) => CliError::Internal(e.to_string()),
            _ => CliError::Schema(e.to_string()),
        }
    }
}
