use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension or field mismatch: {0}")]
    Mismatch(String),

    #[error("enumeration budget exceeded: {size} points > budget {budget}")]
    BudgetExceeded { size: u128, budget: usize },

    #[error("variety is empty")]
    EmptyVariety,

    #[error("closed form unavailable: {0}")]
    BranchUnavailable(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("function vanishes identically")]
    ZeroFunction,

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
