use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("resample point: {0}")]
    Resample(String),
    #[error("degenerate sample after {attempts} attempts: {what}")]
    Degenerate { attempts: usize, what: String },
    #[error("non-finite value at step {0}")]
    NonFinite(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
