use std::path::PathBuf;

use thiserror::Error;
use trackscope::ErrorKind;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Analysis {
        context: String,
        #[source]
        source: trackscope::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 input/parse, 3 graph/metric, 4 config.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 4,
            CliError::Io { .. } => 2,
            CliError::Analysis { source, .. } => match source.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Graph => 3,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Attaches a context string to library errors.
pub trait Context<T> {
    fn context(self, ctx: impl FnOnce() -> String) -> CliResult<T>;
}

impl<T> Context<T> for trackscope::Result<T> {
    fn context(self, ctx: impl FnOnce() -> String) -> CliResult<T> {
        self.map_err(|source| CliError::Analysis {
            context: ctx(),
            source,
        })
    }
}
