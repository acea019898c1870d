use thiserror::Error;

use crate::staircase::Column;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid invariant sequence: {0}")]
    InvalidSequence(String),

    #[error("not a curve ideal: {0}")]
    NotACurveIdeal(String),

    #[error("column ({}, {}) lies outside the staircase rows", .0.a, .0.b)]
    ColumnOutsideStaircase(Column),

    #[error("sporadic-zero budget is only defined for s = 4 or s = 5, got s = {0}")]
    UnsupportedS(usize),

    #[error("no admissible height function: {0}")]
    Infeasible(String),

    #[error("budget z = {z} is smaller than the smallest chain ({needed} zeros)")]
    InsufficientBudget { z: i64, needed: i64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
