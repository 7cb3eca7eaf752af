use thiserror::Error;

#[derive(Debug, Error)]
pub enum RsmError {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid scenario {0} (expected 1, 2 or 3)")]
    InvalidScenario(usize),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("enumeration budget exceeded: K^N = {required} > {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Usage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, RsmError>;
