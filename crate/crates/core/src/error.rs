use thiserror::Error;

use crate::specfun::SpecFunError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("invalid configuration field `{field}`: {reason}")]
    Config { field: String, reason: String },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("{what} did not converge: {detail}")]
    Convergence { what: &'static str, detail: String },
    #[error("parameters too close to a pole of the series expansion: {0}")]
    PoleProximity(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("Lambert W argument {argument} outside branch domain (r_b = {r_b}, r_e = {r_e})")]
    LambertDomain { argument: f64, r_b: f64, r_e: f64 },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
