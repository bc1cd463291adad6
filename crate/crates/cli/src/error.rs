use std::fmt;

/// Failures of a CLI run, split by exit code: configuration problems exit
/// with 2, everything numeric or I/O with 1.
#[derive(Debug)]
pub enum CliError {
    Config { field: String, reason: String },
    Numeric(concmeas::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } => 2,
            Self::Numeric(_) | Self::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config { field, reason } => write!(f, "config error: {field}: {reason}"),
            Self::Numeric(e) => write!(f, "numeric failure: {e}"),
            Self::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<concmeas::Error> for CliError {
    fn from(e: concmeas::Error) -> Self {
        match e {
            // invalid potential parameters are a configuration problem
            concmeas::Error::InvalidSpec { field, reason } => Self::config(field, reason),
            other => Self::Numeric(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Io(e.into())
    }
}
