use eqcob_core::fgl::ParseLawError;
use eqcob_core::gkm::GkmError;
use eqcob_core::schubert::SchubertError;
use eqcob_core::{FglError, RootError, SeriesError, SymmetricError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("malformed wire data: {0}")]
    Wire(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Law(#[from] ParseLawError),
    #[error(transparent)]
    Fgl(#[from] FglError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Gkm(#[from] GkmError),
    #[error(transparent)]
    Schubert(#[from] SchubertError),
    #[error(transparent)]
    Symmetric(#[from] SymmetricError),
}
