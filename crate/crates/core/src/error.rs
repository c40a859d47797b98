use thiserror::Error;

/// Errors raised by the series engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("non-unit series: constant term is zero or missing")]
    NonUnitSeries,
    #[error("integrality violated: nonzero coefficient at exponent {0}")]
    IntegralityViolated(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("divisor class is not ample: {0}")]
    NotAmple(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no forms of this discriminant: D = {0}")]
    NoFormsOfDiscriminant(i64),
    #[error("H on a wall; formula inapplicable")]
    OnWall,
    #[error("limit did not stabilize (last K = {0})")]
    LimitDidNotStabilize(u64),
    #[error("bound doubling changed the result of `{0}`")]
    BoundDoublingMismatch(&'static str),
    #[error("enumeration of `{0}` exceeded the shell cap")]
    ShellCapExceeded(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
