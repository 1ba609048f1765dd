use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: line {line}: {msg}", path.display())]
    Config { path: PathBuf, line: usize, msg: String },
    #[error("{}: {source}", path.display())]
    Network {
        path: PathBuf,
        source: netblow_core::NetworkError,
    },
    #[error(transparent)]
    Core(#[from] netblow_core::Error),
    #[error("{0}")]
    Input(String),
}
