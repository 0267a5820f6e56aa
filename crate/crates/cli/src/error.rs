use std::fmt::Display;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` or `--version`; the rendered text goes to standard output.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Parse(String),
    #[error("invalid value for {flag}: {message}")]
    Usage { flag: String, message: String },
    #[error(transparent)]
    Compute(#[from] entwalk::Error),
    #[error("numerical check failed: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn usage(flag: &str, message: impl Display) -> Self {
        CliError::Usage {
            flag: flag.to_string(),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }
}

impl From<clap::Error> for CliError {
    fn from(e: clap::Error) -> Self {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
            _ => CliError::Parse(e.to_string().trim_end().to_string()),
        }
    }
}
