use std::io;

/// Everything that can go wrong while building or running a simulation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid flow: {0}")]
    Flow(String),
    #[error("input outside the supported domain: {0}")]
    Domain(String),
    #[error("series mismatch: {0}")]
    Comparison(String),
    #[error("non-finite value in {field} at step {step}")]
    NonFinite { step: u64, field: &'static str },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
