use hedonic::HedonicError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid game file: field `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Hedonic(#[from] HedonicError),
}
