use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::cart::CartError;
use crate::config::ConfigError;
use crate::corpus::CorpusError;
use crate::geo::GeoError;
use crate::metrics::MetricsError;
use crate::query::QueryError;
use crate::text::TextError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Cart(#[from] CartError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Degenerate(String),
}

impl Error {
    pub fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        Error::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }

    /// Process exit code: 2 for unreadable or malformed input, 3 for
    /// configuration problems and degenerate data.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Corpus(_) | Error::Query(_) | Error::Io { .. } => 2,
            Error::Text(TextError::Io { .. }) => 2,
            Error::Cart(CartError::InvalidModel(_)) => 2,
            Error::Text(_)
            | Error::Cart(_)
            | Error::Metrics(_)
            | Error::Geo(_)
            | Error::Config(_)
            | Error::Degenerate(_) => 3,
        }
    }
}
