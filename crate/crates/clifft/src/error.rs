use clifft_core::Error as CoreError;

/// Failures surfaced by the command-line frontend, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, unreadable or invalid input files (exit 2).
    #[error("{0}")]
    Usage(String),
    /// A computation failed or a tolerance was exceeded (exit 3).
    #[error("{0}")]
    Numerical(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Extrapolation { .. }
            | CoreError::SeriesTruncation { .. }
            | CoreError::IllConditioned
            | CoreError::TooFewNodes { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
