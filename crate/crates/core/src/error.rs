use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{context}: {message}")]
    Parse { context: String, message: String },

    #[error("{malformed} of {total} lines malformed; input is probably not a crawl log")]
    TooManyMalformed { malformed: usize, total: usize },

    #[error("invalid host {0:?}")]
    InvalidHost(String),

    #[error("unregistrable host {0:?}")]
    UnregistrableHost(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("graph is disconnected; call lcc first")]
    Disconnected,

    #[error("constant series")]
    ConstantSeries,

    #[error("no common trackers")]
    NoCommonTrackers,

    #[error("weights required")]
    WeightsRequired,

    #[error("undefined metric: {0}")]
    Undefined(String),
}

/// Coarse classification used by callers that map errors onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Graph,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io(_)
            | Error::Parse { .. }
            | Error::TooManyMalformed { .. }
            | Error::InvalidHost(_)
            | Error::UnregistrableHost(_)
            | Error::InvalidInput(_) => ErrorKind::Input,
            Error::Disconnected
            | Error::ConstantSeries
            | Error::NoCommonTrackers
            | Error::WeightsRequired
            | Error::Undefined(_) => ErrorKind::Graph,
        }
    }

    pub(crate) fn parse(context: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.to_string(),
        }
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::parse("csv", err)
    }
}
