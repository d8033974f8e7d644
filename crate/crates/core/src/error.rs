use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("nome must satisfy |q| < 1, got {0}")]
    InvalidNome(f64),

    /// The truncation recursion only covers `m < 2^(ell-1)`.
    #[error("requires m < 2^{{ell-1}} (got m = {m}, ell = {ell})")]
    FrequencyOutOfRange { m: u64, ell: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
