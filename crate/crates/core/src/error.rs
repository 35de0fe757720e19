use thiserror::Error;

/// Errors raised by problems, optimizers and indicators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("decision {dim} = {value} is outside [{low}, {high}]")]
    OutOfBounds {
        dim: usize,
        value: f64,
        low: f64,
        high: f64,
    },

    #[error("evaluation budget of {max} exhausted")]
    BudgetExhausted { max: usize },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("all candidates are identical, nothing to split")]
    DegenerateSplit,

    #[error("indicator undefined: {0}")]
    UndefinedIndicator(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(CoreError::Contract(msg.into()))
}
