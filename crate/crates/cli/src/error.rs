use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed config: {0}")]
    Malformed(String),

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("missing required key `{0}`")]
    MissingKey(&'static str),

    #[error("config key `{key}`: {reason}")]
    InvalidKey { key: &'static str, reason: String },

    #[error("unknown preset `{0}` (expected fig2, fig3 or fig5)")]
    UnknownPreset(String),

    #[error("fringe fit needs two fringe periods inside the central lobe, found {0:.3}")]
    FitSpan(f64),

    #[error(
        "oracle check failed at epsilon_I = {epsilon_i}, x = {x} m: \
         oracle {oracle:.12e} vs model {model:.12e} (relative error {relative:.3e})"
    )]
    OracleMismatch {
        epsilon_i: f64,
        x: f64,
        oracle: f64,
        model: f64,
        relative: f64,
    },

    #[error("{context}: {source}")]
    Model {
        context: String,
        source: eraser_core::Error,
    },

    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub(crate) fn invalid(key: &'static str, reason: impl Into<String>) -> Self {
        CliError::InvalidKey {
            key,
            reason: reason.into(),
        }
    }

    pub(crate) fn model(context: impl Into<String>) -> impl FnOnce(eraser_core::Error) -> Self {
        let context = context.into();
        move |source| CliError::Model { context, source }
    }
}
