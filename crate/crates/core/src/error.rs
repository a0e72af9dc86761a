use thiserror::Error;

use crate::functionals::Region;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series has zero constant term and cannot be inverted")]
    ZeroConstantTerm,
    #[error("inner series of a composition must vanish at the origin")]
    InnerConstantNonzero,
    #[error("series is not invertible at the origin (needs c0 = 0 and c1 != 0)")]
    NotInvertibleAtOrigin,
    #[error("series order {got} is too low, need at least {needed}")]
    OrderTooLow { needed: usize, got: usize },
    #[error("linear coefficient is zero")]
    ZeroLinearCoefficient,
    #[error("not a Schwarz function: {0}")]
    InvalidSchwarz(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),
    #[error("pole of the vector field on the disk at z = {0}")]
    PoleOnDisk(String),
    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("square-root branch passes through zero along the continuation path")]
    BranchAmbiguity,
    #[error("lambda lies in region {0:?}, expected S1")]
    WrongRegion(Region),
    #[error("integration step left the unit disk at t = {t}")]
    StepEscapedDisk { t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
