//! Shared error type for the core library.

use thiserror::Error;

/// Errors raised by the spectral, geometric, and inferential operations.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// A Toeplitz covariance failed its Cholesky factorization.
    #[error("covariance matrix is not positive definite")]
    NotPositiveDefinite,

    /// The observed path is shorter than the model order.
    #[error("sample of length {n} is too short for AR order {p}")]
    SampleTooShort { n: usize, p: usize },

    /// A spectral density was non-positive on the evaluation grid.
    #[error("spectral density is not strictly positive at omega = {omega}")]
    NonpositiveSpectrum { omega: f64 },

    /// AR and MA polynomials share a root, so the ARMA model is not identifiable.
    #[error("AR and MA polynomials share a root within tolerance")]
    CommonRoot,

    /// The operation needs analytic root derivatives, which only AR-root
    /// spectral densities carry.
    #[error("spectral density carries no root-derivative evaluators")]
    MissingDerivatives,

    /// The Fisher metric is numerically singular (roots nearly colliding).
    #[error("Fisher metric is near-singular (condition estimate {cond:.3e})")]
    NearSingular { cond: f64 },

    /// A geometry operation was asked to evaluate outside its boundary guard.
    #[error("root modulus {modulus} exceeds the boundary guard {guard}")]
    OutsideGuard { modulus: f64, guard: f64 },

    /// The Bayesian predictive density does not exist for this prior.
    #[error("kappa = {kappa} is not admissible (predictive density requires kappa < 2)")]
    InvalidPrior { kappa: f64 },

    /// Too few posterior draws to form a predictive density.
    #[error("need at least {need} posterior draws, got {got}")]
    TooFewDraws { got: usize, need: usize },

    /// A root sequence violates the parameter-space invariants.
    #[error("invalid roots: {0}")]
    InvalidRoots(String),

    /// A scalar argument is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A quadrature produced a KL divergence below the negativity tolerance,
    /// which signals an unresolved integrand rather than a real value.
    #[error("KL quadrature returned {value:.3e}, below the -1e-12 tolerance")]
    NegativeKl { value: f64 },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CoreError>;
