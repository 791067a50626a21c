use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver did not converge for a matrix of order {order}")]
    NoConvergence { order: usize },

    /// A band touches a neighbour, so its Chern number is not defined on its own.
    #[error("band {band} of {flux} touches a neighbouring band (separation {separation:e})")]
    DegenerateBand {
        flux: String,
        band: usize,
        separation: f64,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Encoding(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
