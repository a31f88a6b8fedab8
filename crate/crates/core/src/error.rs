use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid regression problem: {0}")]
    InvalidProblem(&'static str),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate weights: all weights are zero")]
    DegenerateWeights,
    #[error("negative or non-finite weight at index {0}")]
    InvalidWeight(usize),
    #[error("weight scheme needs n >= 2, got n = {0}")]
    TooFewObservations(usize),
    #[error("subsample size m = {m} outside 1..={max}")]
    SubsampleSize { m: usize, max: usize },
    #[error("multinomial weights have c = 1, requested c = {0}")]
    SchemeConstant(f64),
    #[error("MLE does not exist: residuals take fewer than two distinct values")]
    MleDoesNotExist,
    #[error("non-finite residual at index {0}")]
    NonFinite(usize),
    #[error("model has no intercept column")]
    MissingIntercept,
    #[error("no valid candidate: every candidate has degenerate residuals")]
    NoValidCandidate,
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
