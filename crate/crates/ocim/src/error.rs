use std::path::PathBuf;

/// Errors raised by file formats, configuration, and the experiment driver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("line {line}: probability {value} outside [0, 1]")]
    Range { line: usize, value: f64 },
    #[error("configuration: {0}")]
    Config(String),
    #[error("trace {path}: {msg}")]
    Trace { path: PathBuf, msg: String },
    #[error(transparent)]
    Core(#[from] ocim_core::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for problems with the inputs rather than with the run itself.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::Format { .. } | Error::Range { .. } | Error::Io { .. }
        ) || matches!(
            self,
            Error::Core(ocim_core::Error::Argument(_) | ocim_core::Error::Capacity { .. })
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
