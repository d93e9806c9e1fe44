//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum HedgeError {
    /// An input violated a mathematical precondition (e.g. a nonpositive
    /// spot price or a non-finite argument).
    #[error("{field} must be {requirement}, got {value}")]
    Domain {
        field: &'static str,
        requirement: &'static str,
        value: f64,
    },

    /// An index or window fell outside the available history.
    #[error("range error: {0}")]
    Range(String),

    /// Malformed input data, with file/line context when available.
    #[error("data error at {path}:{line}: {message}")]
    Data {
        path: String,
        line: u64,
        message: String,
    },

    /// A backtest or CLI configuration that cannot be run.
    #[error("configuration error: {0}")]
    Config(String),

    /// A computation produced NaN or infinity where a finite value is
    /// required. Backtests fail hard on this rather than skipping rows.
    #[error("non-finite {what} in {context}")]
    NonFinite { what: &'static str, context: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HedgeError>;

impl HedgeError {
    pub(crate) fn domain(field: &'static str, requirement: &'static str, value: f64) -> Self {
        HedgeError::Domain {
            field,
            requirement,
            value,
        }
    }
}
