use std::path::PathBuf;

use benford_core::BenfordError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NON_CONFORMING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_DATA: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Ingest(#[from] crate::ingest::IngestError),
    #[error(transparent)]
    Benford(#[from] BenfordError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Benford(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Ingest(e) => e.exit_code(),
        }
    }
}
