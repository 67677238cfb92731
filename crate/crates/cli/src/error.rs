use thiserror::Error;

/// Anything that should end the process with exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Input(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Core(Box<divdom::Error>),
}

impl From<divdom::Error> for CliError {
    fn from(e: divdom::Error) -> Self {
        CliError::Core(Box::new(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
