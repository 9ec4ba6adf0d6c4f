use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{origin}:{line}:{column}: {message}")]
    Parse { origin: String, line: usize, column: usize, message: String },
    #[error("missing parameter {0:?} for this task")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Core(oiglab::Error),
}

impl From<oiglab::Error> for CliError {
    fn from(e: oiglab::Error) -> Self {
        match e {
            oiglab::Error::Capacity { .. } => CliError::Budget(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
