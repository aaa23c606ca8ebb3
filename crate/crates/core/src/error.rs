use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("index {index} is beyond the materialized prefix (max index {max_index})")]
    Range { index: usize, max_index: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("|t| = {t} is outside the safe disc 0.95*R with convergence radius R = {radius}")]
    Radius { t: String, radius: String },

    #[error("singular step n = {step}: {detail}")]
    Singular { step: usize, detail: String },

    #[error(
        "eta = {eta} gives a row with negative entries (eta_max^({n}) = {eta_max}); \
         the sequence is in Sigma- at this horizon and the row is not a probability vector"
    )]
    NotAProbability { n: usize, eta: String, eta_max: String },

    #[error("{0} is not available in exact mode; use an approximate scalar")]
    NeedsApprox(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
