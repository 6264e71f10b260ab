use thiserror::Error;

/// Errors raised by the lattice, special-function and trajectory engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Ladder quantities need a nonzero force.
    #[error("force F = 0 has no Wannier-Stark ladder")]
    NoLadder,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("bessel argument {argument} outside supported range (|x| <= {limit})")]
    BesselRange { argument: f64, limit: f64 },

    /// The packet reached the edge of the truncated lattice.
    #[error("boundary leak {leak:.3e} exceeds threshold {threshold:.1e} at t = {t}")]
    BoundaryLeak { t: f64, leak: f64, threshold: f64 },

    #[error("non-finite amplitudes at t = {t}")]
    NonFinite { t: f64 },

    /// The momentum multiplier is not resolved by the Fourier grid.
    #[error("aliasing: kernel tail {tail:.3e} at the edge of a {points}-point grid")]
    Aliasing { tail: f64, points: usize },

    #[error("sigma_pp blow-up ({sigma_pp:.3e}) at t = {t}")]
    SigmaBlowUp { t: f64, sigma_pp: f64 },

    #[error("singular covariance matrix (det = {det})")]
    SingularCovariance { det: f64 },

    /// First-order approximant denominator reached zero.
    #[error("perturbative approximation invalid at t = {t}")]
    ApproximationInvalid { t: f64 },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    /// Halving the step changed the result by more than the contract allows.
    #[error("step-halving check failed: change {change:.3e} > {limit:.1e}")]
    NotConverged { change: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
