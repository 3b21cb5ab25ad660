use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole of {func} at s = {at}")]
    Pole { func: &'static str, at: String },
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("budget exceeded in {what}: limit {limit}")]
    Budget { what: &'static str, limit: usize },
    #[error("region has infinite hyperbolic area: {0}")]
    DivergentRegion(String),
    #[error("function is not 1-periodic (endpoint mismatch {0:e})")]
    NonPeriodic(f64),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("missing input: {0}")]
    MissingInput(String),
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
