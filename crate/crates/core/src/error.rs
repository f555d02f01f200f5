use thiserror::Error;

use crate::certify::CoverageReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("potential exponent must be finite and at least 2, got {0}")]
    InvalidExponent(f64),

    #[error("a ring configuration needs at least 2 bodies, got {0}")]
    TooFewBodies(usize),

    #[error("angle {0} is not finite")]
    NonFiniteAngle(f64),

    #[error("collision: angular separation {separation:e} is below the collision threshold")]
    Collision { separation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires an even number of bodies, got {0}")]
    OddDimension(usize),

    #[error("mass {index} is not positive ({value})")]
    NonPositiveMass { index: usize, value: f64 },

    #[error("matrix is not symmetric (defect {0:e})")]
    NotSymmetric(f64),

    #[error("positive mass region is only analysed for kernel dimension 1 or 2, got {0}")]
    UnsupportedKernelDimension(usize),

    #[error("ordering violation: {0}")]
    Ordering(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate denominator in {0}")]
    DegenerateDenominator(&'static str),

    #[error("no positive mass vector in the kernel")]
    NoPositiveMass,

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("interval evaluation inconclusive: {0}")]
    Inconclusive(String),

    #[error("certification failed: {0}")]
    CertificationFailed(String),

    #[error("resource limit reached after {} boxes", partial.boxes_processed)]
    ResourceLimit { partial: Box<CoverageReport> },
}
