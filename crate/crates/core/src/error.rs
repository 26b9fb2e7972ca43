use thiserror::Error;

use crate::precision::Ball;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("node budget exceeded after {nodes} nodes; best enclosure has radius {radius:e}")]
    BudgetExceeded { nodes: usize, radius: f64, best: Box<Ball> },
}
