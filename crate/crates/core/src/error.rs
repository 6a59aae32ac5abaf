use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid channel (p = {p}, q = {q}): {reason}")]
    InvalidChannel { p: f64, q: f64, reason: &'static str },

    #[error("{name} = {value} outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: String,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("optimization failed: {0}")]
    OptimizationFailed(String),

    #[error("malformed design dump at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, domain: impl Into<String>) -> Error {
    Error::Domain {
        name,
        value,
        domain: domain.into(),
    }
}
