//! Monte Carlo estimation of predictive risks, normalized risk differences,
//! domination scans, and convergence ladders.
//!
//! A risk trial simulates a path under the true roots, builds a predictive
//! spectral density (Bayesian via MCMC + posterior averaging, or estimative
//! via the MLE plug-in), and accumulates the KL divergence from the true
//! spectrum. Risk differences reuse the same simulated data and the same
//! chain seed for both prior arms: the O(N⁻²) gap would drown in Monte
//! Carlo noise without common random numbers. Trials are independent work
//! units executed in parallel; per-trial seeds derive from (seed, trial),
//! so parallel and serial runs agree bit-for-bit.

use rayon::prelude::*;

use crate::error::{CoreError, Result};
use crate::gaussian::sample_ar_path;
use crate::geometry::PriorSpec;
use crate::inference::{mle, posterior_sample, predictive_psd_on, McmcOptions, MleOptions};
use crate::rng::RngSeed;
use crate::spectral::{kl_divergence_grids, psd_from_roots, uniform_omegas, ArRoots};

/// Monte Carlo estimate of a risk or risk-difference quantity.
#[derive(Debug, Clone)]
pub struct RiskEstimate {
    pub mean: f64,
    /// Sample standard deviation of the per-trial values over √trials.
    pub stderr: f64,
    /// Trials included in the estimate.
    pub trials: usize,
    /// Trials excluded because the fit did not converge.
    pub excluded_trials: usize,
    /// Path length of each simulated sample.
    pub n: usize,
    pub seed: RngSeed,
}

/// How the predictive spectral density is built in a risk trial.
#[derive(Debug, Clone)]
pub enum PredictiveMethod {
    /// Plug-in spectral density at the maximum likelihood estimate.
    Mle,
    /// Bayesian posterior mixture under the given prior.
    Bayes(PriorSpec),
}

/// Shared quadrature and sampler settings for risk experiments.
#[derive(Debug, Clone)]
pub struct RiskSettings {
    /// Grid size for the outer KL quadrature and predictive averaging.
    pub grid_size: usize,
    pub mcmc: McmcOptions,
    pub mle: MleOptions,
}

impl Default for RiskSettings {
    fn default() -> Self {
        Self {
            grid_size: 4096,
            mcmc: McmcOptions::default(),
            mle: MleOptions::default(),
        }
    }
}

/// Configuration of a scan or ladder experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Real ξ grid for domination scans, symmetric about 0.
    pub xi_grid: Vec<f64>,
    /// Path lengths; scans use the first entry, ladders all of them.
    pub n_values: Vec<usize>,
    pub kappa_values: Vec<f64>,
    pub trials: usize,
    pub grid_size: usize,
    pub mcmc: McmcOptions,
    pub master_seed: RngSeed,
}

impl ExperimentConfig {
    fn settings(&self) -> RiskSettings {
        RiskSettings {
            grid_size: self.grid_size,
            mcmc: self.mcmc.clone(),
            mle: MleOptions::default(),
        }
    }
}

/// Per-point risk-difference estimates over a ξ grid, with the maximal
/// symmetric interval on which the κ = −1 arm dominates the baseline.
#[derive(Debug, Clone)]
pub struct DominationScan {
    pub xi_grid: Vec<f64>,
    pub n: usize,
    pub kappa_values: Vec<f64>,
    /// Indexed `[kappa][xi]` in the order of the config vectors.
    pub z_estimates: Vec<Vec<RiskEstimate>>,
    /// Present when κ = −1 is among the scanned priors and Z > 0 at 0.
    pub domination_interval: Option<(f64, f64)>,
}

/// Pairwise (cascade) summation: associative enough to be reproducible and
/// accurate regardless of trial count.
fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

fn summarize(
    values: &[f64],
    excluded: usize,
    n: usize,
    seed: RngSeed,
) -> Result<RiskEstimate> {
    let t = values.len();
    if t < 2 {
        return Err(CoreError::InvalidParameter(
            "need at least 2 included trials".into(),
        ));
    }
    let mean = pairwise_sum(values) / t as f64;
    let centered: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let sd = (pairwise_sum(&centered) / (t - 1) as f64).sqrt();
    Ok(RiskEstimate {
        mean,
        stderr: sd / (t as f64).sqrt(),
        trials: t,
        excluded_trials: excluded,
        n,
        seed,
    })
}

/// Per-trial seed layout: substream 0 drives the data, substream 1 the
/// posterior chains (both arms), substream 2 the optimizer restarts.
fn trial_seed(seed: RngSeed, trial: usize) -> RngSeed {
    seed.substream(trial as u64)
}

/// Monte Carlo estimate of the predictive risk E[KL(S_θ₀ ‖ Ŝ)] at θ₀.
pub fn risk_estimate(
    theta0: &ArRoots,
    method: &PredictiveMethod,
    n: usize,
    trials: usize,
    seed: RngSeed,
    settings: &RiskSettings,
) -> Result<RiskEstimate> {
    if trials < 2 {
        return Err(CoreError::InvalidParameter("need at least 2 trials".into()));
    }
    if let PredictiveMethod::Bayes(prior) = method {
        if !prior.predictive_exists() {
            return Err(CoreError::InvalidPrior { kappa: prior.kappa() });
        }
    }
    let p = theta0.order();
    let omegas = uniform_omegas(settings.grid_size);
    let truth = psd_from_roots(theta0);
    let truth_grid: Vec<f64> = omegas.iter().map(|&w| truth.value(w)).collect();

    let per_trial: Vec<Result<Option<f64>>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let ts = trial_seed(seed, t);
            let sample = sample_ar_path(theta0, n, ts.substream(0))?;
            match method {
                PredictiveMethod::Mle => {
                    let opts = MleOptions {
                        seed: ts.substream(2),
                        ..settings.mle.clone()
                    };
                    let fit = mle(&sample, p, &opts)?;
                    if !fit.converged {
                        return Ok(None);
                    }
                    let est = psd_from_roots(&fit.roots);
                    let est_grid: Vec<f64> = omegas.iter().map(|&w| est.value(w)).collect();
                    Ok(Some(kl_divergence_grids(&truth_grid, &est_grid)?))
                }
                PredictiveMethod::Bayes(prior) => {
                    let draws =
                        posterior_sample(&sample, prior, p, &settings.mcmc, ts.substream(1))?;
                    let pred = predictive_psd_on(&omegas, &draws)?;
                    Ok(Some(kl_divergence_grids(&truth_grid, pred.values())?))
                }
            }
        })
        .collect();

    let mut values = Vec::with_capacity(trials);
    let mut excluded = 0usize;
    for r in per_trial {
        match r? {
            Some(v) => values.push(v),
            None => excluded += 1,
        }
    }
    summarize(&values, excluded, n, seed)
}

/// Normalized risk difference Z⁽ᵏ⁾ = N² (R(Ŝ_{π_J}) − R(Ŝ_{π⁽ᵏ⁾})) at θ₀,
/// estimated with paired trials: each trial feeds the same data and chain
/// seed to both prior arms, and the reported mean and stderr are of the
/// N²-scaled paired differences.
pub fn risk_difference(
    theta0: &ArRoots,
    kappa: f64,
    n: usize,
    trials: usize,
    seed: RngSeed,
    settings: &RiskSettings,
) -> Result<RiskEstimate> {
    if trials < 2 {
        return Err(CoreError::InvalidParameter("need at least 2 trials".into()));
    }
    let prior = PriorSpec::Kappa(kappa);
    if !prior.predictive_exists() {
        return Err(CoreError::InvalidPrior { kappa });
    }
    let p = theta0.order();
    let omegas = uniform_omegas(settings.grid_size);
    let truth = psd_from_roots(theta0);
    let truth_grid: Vec<f64> = omegas.iter().map(|&w| truth.value(w)).collect();
    let scale = (n * n) as f64;

    let per_trial: Vec<Result<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let ts = trial_seed(seed, t);
            let sample = sample_ar_path(theta0, n, ts.substream(0))?;
            let chain_seed = ts.substream(1);
            let arm = |prior: &PriorSpec| -> Result<f64> {
                let draws = posterior_sample(&sample, prior, p, &settings.mcmc, chain_seed)?;
                let pred = predictive_psd_on(&omegas, &draws)?;
                kl_divergence_grids(&truth_grid, pred.values())
            };
            let kl_jeffreys = arm(&PriorSpec::Jeffreys)?;
            let kl_kappa = arm(&prior)?;
            Ok(scale * (kl_jeffreys - kl_kappa))
        })
        .collect();

    let values = per_trial.into_iter().collect::<Result<Vec<f64>>>()?;
    summarize(&values, 0, n, seed)
}

/// Runs [`risk_difference`] over the configured ξ grid and κ values at
/// N = first configured path length, and reports the maximal symmetric
/// interval where the κ = −1 estimates stay positive in mean.
pub fn scan_domination(config: &ExperimentConfig) -> Result<DominationScan> {
    if config.xi_grid.is_empty() || config.n_values.is_empty() {
        return Err(CoreError::InvalidParameter(
            "scan needs a xi grid and a path length".into(),
        ));
    }
    let n = config.n_values[0];
    let settings = config.settings();
    let mut z_estimates = Vec::with_capacity(config.kappa_values.len());
    for (ki, &kappa) in config.kappa_values.iter().enumerate() {
        let mut row = Vec::with_capacity(config.xi_grid.len());
        for (xi_idx, &xi) in config.xi_grid.iter().enumerate() {
            let theta0 = ArRoots::single(num_complex::Complex64::new(xi, 0.0))?;
            let point_seed = config
                .master_seed
                .substream((ki * config.xi_grid.len() + xi_idx) as u64);
            row.push(risk_difference(
                &theta0,
                kappa,
                n,
                config.trials,
                point_seed,
                &settings,
            )?);
        }
        z_estimates.push(row);
    }
    let domination_interval = config
        .kappa_values
        .iter()
        .position(|&k| k == -1.0)
        .and_then(|ki| symmetric_positive_interval(&config.xi_grid, &z_estimates[ki]));
    Ok(DominationScan {
        xi_grid: config.xi_grid.clone(),
        n,
        kappa_values: config.kappa_values.clone(),
        z_estimates,
        domination_interval,
    })
}

/// Largest L in the grid such that every grid point with |ξ| ≤ L has a
/// positive mean estimate; returns the interval [−L, L].
fn symmetric_positive_interval(
    xi_grid: &[f64],
    estimates: &[RiskEstimate],
) -> Option<(f64, f64)> {
    let mut radii: Vec<f64> = xi_grid.iter().map(|x| x.abs()).collect();
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    radii.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut best: Option<f64> = None;
    for &r in &radii {
        let all_positive = xi_grid
            .iter()
            .zip(estimates)
            .filter(|(x, _)| x.abs() <= r + 1e-12)
            .all(|(_, e)| e.mean > 0.0);
        if all_positive {
            best = Some(r);
        } else {
            break;
        }
    }
    best.map(|r| (-r, r))
}

/// Z estimates across the configured path lengths at a fixed real ξ, for
/// plotting convergence toward the pointwise limit.
pub fn convergence_ladder(
    xi: f64,
    kappa: f64,
    n_values: &[usize],
    trials: usize,
    seed: RngSeed,
    settings: &RiskSettings,
) -> Result<Vec<RiskEstimate>> {
    let theta0 = ArRoots::single(num_complex::Complex64::new(xi, 0.0))?;
    n_values
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            risk_difference(&theta0, kappa, n, trials, seed.substream(i as u64), settings)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn quick_settings() -> RiskSettings {
        RiskSettings {
            grid_size: 512,
            mcmc: McmcOptions {
                burn_in: 200,
                keep: 200,
                thinning: 1,
                ..Default::default()
            },
            mle: MleOptions::default(),
        }
    }

    #[test]
    fn two_trial_sanity() {
        let theta0 = ArRoots::single(Complex64::ZERO).unwrap();
        let est = risk_estimate(
            &theta0,
            &PredictiveMethod::Mle,
            64,
            2,
            RngSeed::new(81),
            &quick_settings(),
        )
        .unwrap();
        assert!(est.stderr.is_finite());
        assert!(est.mean >= 0.0);
        assert_eq!(est.trials + est.excluded_trials, 2);
    }

    #[test]
    fn kappa_one_difference_is_identically_zero() {
        let theta0 = ArRoots::single(Complex64::new(0.3, 0.0)).unwrap();
        let est = risk_difference(&theta0, 1.0, 24, 4, RngSeed::new(82), &quick_settings()).unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn kappa_at_two_is_rejected() {
        let theta0 = ArRoots::single(Complex64::ZERO).unwrap();
        assert!(matches!(
            risk_difference(&theta0, 2.0, 24, 4, RngSeed::new(83), &quick_settings()),
            Err(CoreError::InvalidPrior { .. })
        ));
    }

    #[test]
    fn estimates_are_deterministic() {
        let config = ExperimentConfig {
            xi_grid: vec![-0.2, 0.0, 0.2],
            n_values: vec![16],
            kappa_values: vec![-1.0, 1.0],
            trials: 4,
            grid_size: 256,
            mcmc: McmcOptions {
                burn_in: 100,
                keep: 150,
                thinning: 1,
                ..Default::default()
            },
            master_seed: RngSeed::new(84),
        };
        let a = scan_domination(&config).unwrap();
        let b = scan_domination(&config).unwrap();
        for (ra, rb) in a.z_estimates.iter().zip(&b.z_estimates) {
            for (ea, eb) in ra.iter().zip(rb) {
                assert_eq!(ea.mean, eb.mean);
                assert_eq!(ea.stderr, eb.stderr);
            }
        }
        // The kappa = 1 row is exactly zero, so its interval is empty.
        let one_idx = 1;
        assert!(a.z_estimates[one_idx].iter().all(|e| e.mean == 0.0));
    }

    #[test]
    fn paired_differences_reduce_variance() {
        let theta0 = ArRoots::single(Complex64::new(0.3, 0.0)).unwrap();
        let settings = quick_settings();
        let trials = 40;
        let paired =
            risk_difference(&theta0, -1.0, 24, trials, RngSeed::new(85), &settings).unwrap();
        let arm_j = risk_estimate(
            &theta0,
            &PredictiveMethod::Bayes(PriorSpec::Jeffreys),
            24,
            trials,
            RngSeed::new(86),
            &settings,
        )
        .unwrap();
        let arm_k = risk_estimate(
            &theta0,
            &PredictiveMethod::Bayes(PriorSpec::Kappa(-1.0)),
            24,
            trials,
            RngSeed::new(87),
            &settings,
        )
        .unwrap();
        let unpaired_stderr = (24.0f64 * 24.0)
            * (arm_j.stderr * arm_j.stderr + arm_k.stderr * arm_k.stderr).sqrt();
        assert!(
            paired.stderr < unpaired_stderr,
            "paired {} vs unpaired {}",
            paired.stderr,
            unpaired_stderr
        );
    }

    #[test]
    fn mle_risk_is_nonnegative_at_two_sigma() {
        let theta0 = ArRoots::single(Complex64::new(0.4, 0.0)).unwrap();
        let est = risk_estimate(
            &theta0,
            &PredictiveMethod::Mle,
            48,
            30,
            RngSeed::new(88),
            &quick_settings(),
        )
        .unwrap();
        assert!(est.mean - 2.0 * est.stderr >= 0.0);
    }
}
