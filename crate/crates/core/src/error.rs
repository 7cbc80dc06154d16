use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alphabet needs at least 2 symbols, got {0}")]
    AlphabetTooSmall(u32),

    #[error("invalid alphabet labels: {0}")]
    InvalidLabels(String),

    #[error("symbol {symbol} is out of range for an alphabet of size {size}")]
    SymbolOutOfRange { symbol: u32, size: u32 },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid CDF lower bound: {0}")]
    InvalidBound(String),

    #[error("invalid ground truth: {0}")]
    InvalidGroundTruth(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("enumeration budget exceeded: {required} evaluations required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
}
