use thiserror::Error;

/// Errors raised by window construction, dual construction, and the
/// analysis/synthesis operators.
#[derive(Error, Debug)]
pub enum Error {
    #[error("B-spline order must be at least 1, got {0}")]
    InvalidOrder(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("exponent rates are degenerate (minimal gap {gap:.3e} < {min_gap:.3e}); the explicit formula divides by rate differences")]
    DegenerateRates { gap: f64, min_gap: f64 },

    #[error("the translates do not satisfy the lower frame condition (min of the gram function is {lower:.3e})")]
    NotAFrame { lower: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("gram function is near zero ({gram:.3e} at x = {at}); canonical dual would be singular")]
    SingularDual { at: f64, gram: f64 },

    #[error("modulation step b = {b} is outside the admissible range (0, {max}] for this construction")]
    InvalidModulationStep { b: f64, max: f64 },

    #[error("invalid dual coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("trigonometric series truncated too coarsely: coefficient magnitude {tail:.3e} at j = {j_max} exceeds {limit:.1e}; increase j_max")]
    TruncationTooCoarse { tail: f64, j_max: usize, limit: f64 },

    #[error("window is not a certified dual (duality residual {residual:.3e} > tolerance {tolerance:.1e})")]
    NotADual { residual: f64, tolerance: f64 },

    #[error("duality condition is implemented for translation step a = 1 only, got a = {a}")]
    UnsupportedLattice { a: f64 },

    #[error("signal grids do not match: {0}")]
    GridMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
