use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex v{index} out of range (hypergraph has {count} vertices)")]
    VertexOutOfRange { index: usize, count: usize },

    #[error("hyperedge e{index} out of range (hypergraph has {count} hyperedges)")]
    EdgeOutOfRange { index: usize, count: usize },

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("generation failed: {0}")]
    GenerationFailure(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    pub(crate) fn contract(message: impl Into<String>) -> Self {
        Error::Contract(message.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
