//! Complex-valued circular-symmetric autoregressive processes: spectral
//! densities, Kähler Fisher geometry, shrinkage priors, Bayesian predictive
//! spectral densities, and a Monte Carlo risk laboratory.
//!
//! The model family is AR(p; ℂ) parameterized by the distinct roots
//! ξ = (ξ¹, …, ξᵖ) of the autoregressive polynomial inside the open unit
//! disk, with unit innovation variance. On this parameter space the Fisher
//! metric is Hermitian with `g_{ij̄} = 1/(1 − ξⁱ ξ̄ʲ)` and the space is
//! Kähler, which is what makes the closed-form prior constructions in
//! [`geometry`] possible.

pub mod error;
pub mod gaussian;
pub mod geometry;
pub mod inference;
pub mod rng;
pub mod risk;
pub mod spectral;

mod linalg;
mod wirtinger;

pub use error::{CoreError, Result};
pub use gaussian::{ComplexSample, ToeplitzCovariance};
pub use geometry::{HermitianMetric, PriorSpec, ScalarField};
pub use inference::{MleOptions, MleResult, McmcOptions, PosteriorDraws};
pub use rng::RngSeed;
pub use risk::{DominationScan, ExperimentConfig, RiskEstimate};
pub use spectral::{ArRoots, ArmaSpec, Psd, SpectralGrid, WirtIndex};
