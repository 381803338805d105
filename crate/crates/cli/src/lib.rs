//! Dataset generation, detection and evaluation on files.
//!
//! The `lineshape` binary is a thin clap wrapper over [`commands`]; the
//! commands are public so tests can drive them without a subprocess.

pub mod commands;
pub mod config;
pub mod formats;

use std::path::Path;

use thiserror::Error;

pub use commands::{cmd_detect, cmd_eval, cmd_gen, DetectArgs, DetectInput, EvalArgs, GenArgs, SweepSpec};
pub use config::RunConfig;
pub use formats::FormatError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format {
        path: String,
        #[source]
        source: FormatError,
    },
    #[error("{path}: invalid JSON: {reason}")]
    Json { path: String, reason: String },
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error("missing {kind} for ids {ids:?}")]
    MissingIds { kind: String, ids: Vec<usize> },
    #[error(transparent)]
    Core(#[from] lineshape::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn format(path: &Path, source: FormatError) -> Self {
        Self::Format {
            path: path.display().to_string(),
            source,
        }
    }
}
