use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no arrival: {0}")]
    NoArrival(String),

    #[error("unsupported detection mode: {0}")]
    UnsupportedMode(String),

    #[error("oracle refused: {required:.3e} quadrature points needed, limit is {limit:.0e}")]
    OracleRefused { required: f64, limit: f64 },

    #[error("empty support: {0}")]
    EmptySupport(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("singular current ratio: final momentum is zero")]
    SingularRatio,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI for error reporting.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::NoArrival(_) => "no-arrival",
            Error::UnsupportedMode(_) => "unsupported-mode",
            Error::OracleRefused { .. } => "oracle-refused",
            Error::EmptySupport(_) => "empty-support",
            Error::InsufficientData(_) => "insufficient-data",
            Error::SingularRatio => "singular-ratio",
            Error::InvalidInput(_) => "invalid-input",
        }
    }
}
