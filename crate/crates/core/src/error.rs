use thiserror::Error;

/// Errors raised by network construction, the dynamics and the allocator.
///
/// Agent and row indices carried by the variants are 0-based; the display
/// strings print them 1-based to match the file formats.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("weight matrix is not square: {rows} rows, row {bad_row} has {cols} entries")]
    NotSquare { rows: usize, bad_row: usize, cols: usize },

    #[error("row {} sums to {sum}, expected 1", .row + 1)]
    RowSum { row: usize, sum: f64 },

    #[error("agent {} has self-influence {value}, expected 0", .agent + 1)]
    Diagonal { agent: usize, value: f64 },

    #[error("weight g[{},{}] = {value} is negative", .row + 1, .col + 1)]
    NegativeWeight { row: usize, col: usize, value: f64 },

    #[error("invalid size: {0}")]
    Size(String),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParam {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("expected a vector of length {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("consumption of agent {} left [-1/2, 1/2] at t = {t}: y = {value}", .agent + 1)]
    Bounds { agent: usize, t: usize, value: f64 },

    #[error("initial consumption of agent {} is {value}, outside [-1/2, 1/2]", .agent + 1)]
    Capacity { agent: usize, value: f64 },

    #[error("linear solve failed: {0}")]
    Solve(String),

    #[error("threshold {threshold} <= 1: every agent is seedable, the seed count is {n}")]
    Regime { threshold: f64, n: usize },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("self-check failed for {quantity}: expected {expected}, got {actual}")]
    SelfCheck {
        quantity: String,
        expected: f64,
        actual: f64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
