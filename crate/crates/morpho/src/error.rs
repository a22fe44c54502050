//! Error type shared across the crate.

use std::path::PathBuf;

/// Errors produced by volume construction, analysis, and file I/O.
#[derive(Debug, thiserror::Error)]
pub enum MorphoError {
    /// A volume with zero voxels was supplied where data is required.
    #[error("empty input: {0}")]
    EmptyInput(String),

    /// A parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An index lies outside the volume bounds.
    #[error("index ({z}, {y}, {x}) out of bounds for dims ({nz}, {ny}, {nx})")]
    IndexOutOfBounds {
        z: usize,
        y: usize,
        x: usize,
        nz: usize,
        ny: usize,
        nx: usize,
    },

    /// Input data does not match a supported file layout.
    #[error("format error: {0}")]
    Format(String),

    /// A requested combination of modes is not supported.
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    /// A writer hit a hard format limit (e.g. the 32-bit STL face count).
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An underlying read or write failed; the path gives context.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl MorphoError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        MorphoError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, MorphoError>;
