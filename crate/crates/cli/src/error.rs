//! CLI-level errors mapped onto the process exit codes.

use std::path::PathBuf;

/// Exit code for bad invocations (unknown flags, presets, malformed values).
pub const EXIT_USAGE: i32 = 1;
/// Exit code for unreadable or invalid data.
pub const EXIT_DATA: i32 = 2;
/// Exit code when a fit fails to converge (a partial report is still written).
pub const EXIT_NONCONVERGED: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}:{line}: {message}")]
    Csv { path: String, line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Core(#[from] regimefit_core::Error),
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_DATA,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}
