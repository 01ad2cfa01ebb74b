//! Maximum likelihood estimation and posterior sampling over the root
//! parameter space, producing estimative and Bayesian predictive power
//! spectral densities.
//!
//! The MLE maximizes the exact likelihood by derivative-free simplex search
//! in the 2p real root coordinates, with a hard barrier at root modulus
//! 0.995 and multiple starts (origin, conditional-least-squares warm start,
//! random disk points). The posterior sampler is random-walk Metropolis
//! with step-size adaptation frozen after burn-in; proposals outside the
//! open unit polydisk are rejected because the prior support ends there.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::gaussian::{ar_log_likelihood, whittle_log_likelihood, ComplexSample};
use crate::geometry::{log_prior_density, PriorSpec};
use crate::linalg::CMat;
use crate::rng::RngSeed;
use crate::spectral::{
    coeffs_to_roots, psd_from_roots, uniform_omegas, ArRoots, Psd, SpectralGrid,
};

/// Root-modulus barrier shared with the geometry module's boundary guard.
pub const MLE_BARRIER: f64 = 0.995;

/// Which objective the optimizer maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Exact Gaussian likelihood by prediction-error decomposition.
    Exact,
    /// Whittle frequency-domain approximation.
    Whittle,
}

/// Optimizer options.
#[derive(Debug, Clone)]
pub struct MleOptions {
    pub objective: Objective,
    /// Iteration cap per simplex run.
    pub max_iters: usize,
    /// Number of random starts in addition to the origin and warm start.
    pub random_starts: usize,
    pub seed: RngSeed,
}

impl Default for MleOptions {
    fn default() -> Self {
        Self {
            objective: Objective::Exact,
            max_iters: 600,
            random_starts: 2,
            seed: RngSeed::new(0),
        }
    }
}

/// Result of a maximum-likelihood fit.
#[derive(Debug, Clone)]
pub struct MleResult {
    /// Fitted roots in canonical order (by real part, then imaginary part).
    pub roots: ArRoots,
    /// The achieved objective value.
    pub loglik: f64,
    pub converged: bool,
    /// Iterations of the winning simplex run.
    pub iterations: usize,
    /// Starting points evaluated.
    pub restarts_used: usize,
}

fn pack(roots: &[Complex64]) -> Vec<f64> {
    roots.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn unpack(x: &[f64]) -> Vec<Complex64> {
    x.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

/// Conditional least squares: solves the normal equations of
/// min Σ_{t≥p} |z_t + Σ aᵢ z_{t−i}|² for the AR coefficients.
pub fn conditional_least_squares(sample: &ComplexSample, p: usize) -> Result<Vec<Complex64>> {
    let z = sample.values();
    let n = z.len();
    if n < 2 * p + 1 {
        return Err(CoreError::SampleTooShort { n, p });
    }
    let mut gram = CMat::zeros(p);
    let mut rhs = vec![Complex64::ZERO; p];
    for t in p..n {
        for i in 0..p {
            rhs[i] -= z[t] * z[t - 1 - i].conj();
            for j in 0..p {
                gram[(i, j)] += z[t - 1 - j] * z[t - 1 - i].conj();
            }
        }
    }
    gram.lu_solve(&rhs)
}

/// Roots implied by the conditional-least-squares fit, clamped into the
/// barrier disk and nudged apart if nearly coincident.
fn cls_warm_start(sample: &ComplexSample, p: usize) -> Option<Vec<Complex64>> {
    let coeffs = conditional_least_squares(sample, p).ok()?;
    let mut roots = coeffs_to_roots(&coeffs);
    for r in &mut roots {
        if !r.re.is_finite() || !r.im.is_finite() {
            return None;
        }
        if r.norm() > 0.99 {
            *r *= 0.99 / r.norm();
        }
    }
    separate_roots(&mut roots);
    Some(roots)
}

/// Nudges nearly coincident roots apart so the point lies in Θ₁.
fn separate_roots(roots: &mut [Complex64]) {
    let p = roots.len();
    for i in 0..p {
        for j in i + 1..p {
            if (roots[i] - roots[j]).norm() < 1e-8 {
                let dir = Complex64::from_polar(2e-8, 0.7 + i as f64 + 2.3 * j as f64);
                roots[j] += dir;
                if roots[j].norm() > 0.99 {
                    roots[j] *= 0.99 / roots[j].norm();
                }
            }
        }
    }
}

/// Nelder-Mead simplex minimization; returns (best x, best f, iterations,
/// converged).
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    initial_step: f64,
    max_iters: usize,
) -> (Vec<f64>, f64, usize, bool) {
    let dim = start.len();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), f(start)));
    for k in 0..dim {
        let mut x = start.to_vec();
        x[k] += initial_step;
        let fx = f(&x);
        simplex.push((x, fx));
    }
    let mut iters = 0;
    let mut converged = false;
    while iters < max_iters {
        iters += 1;
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        let spread = simplex
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0f64, f64::max);
        if (worst - best).abs() <= 1e-10 * (1.0 + best.abs()) && spread < 1e-8 {
            converged = true;
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|(x, _)| x[k]).sum::<f64>() / dim as f64)
            .collect();
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&simplex[dim].0)
            .map(|(c, w)| c + alpha * (c - w))
            .collect();
        let f_reflect = f(&reflect);
        if f_reflect < simplex[0].1 {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&reflect)
                .map(|(c, r)| c + gamma * (r - c))
                .collect();
            let f_expand = f(&expand);
            simplex[dim] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
        } else if f_reflect < simplex[dim - 1].1 {
            simplex[dim] = (reflect, f_reflect);
        } else {
            let contract: Vec<f64> = centroid
                .iter()
                .zip(&simplex[dim].0)
                .map(|(c, w)| c + rho * (w - c))
                .collect();
            let f_contract = f(&contract);
            if f_contract < simplex[dim].1 {
                simplex[dim] = (contract, f_contract);
            } else {
                let best_x = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<f64> = entry
                        .0
                        .iter()
                        .zip(&best_x)
                        .map(|(x, b)| b + sigma * (x - b))
                        .collect();
                    entry.1 = f(&shrunk);
                    entry.0 = shrunk;
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let (x, fx) = simplex.swap_remove(0);
    (x, fx, iters, converged)
}

/// Maximum likelihood estimate of the AR(p; ℂ) roots.
pub fn mle(sample: &ComplexSample, p: usize, options: &MleOptions) -> Result<MleResult> {
    let n = sample.len();
    if p == 0 {
        return Err(CoreError::InvalidParameter("order p must be positive".into()));
    }
    if n < p.max(8) {
        return Err(CoreError::SampleTooShort { n, p });
    }

    let objective = |x: &[f64]| -> f64 {
        let roots = unpack(x);
        if roots.iter().any(|r| r.norm() > MLE_BARRIER) {
            return f64::INFINITY;
        }
        let value = match options.objective {
            Objective::Exact => ar_log_likelihood(&roots, sample),
            Objective::Whittle => match ArRoots::new(roots.clone()) {
                Ok(ar) => whittle_log_likelihood(&psd_from_roots(&ar), sample),
                Err(_) => {
                    // Collided roots: evaluate through the raw PSD product,
                    // which stays well-defined.
                    let mut sep = roots.clone();
                    separate_roots(&mut sep);
                    ArRoots::new(sep)
                        .and_then(|ar| whittle_log_likelihood(&psd_from_roots(&ar), sample))
                }
            },
        };
        match value {
            Ok(l) if l.is_finite() => -l,
            _ => f64::INFINITY,
        }
    };

    // Multistarts: near-origin, CLS warm start, and random disk points.
    let mut starts: Vec<Vec<Complex64>> = Vec::new();
    let mut origin: Vec<Complex64> = vec![Complex64::ZERO; p];
    separate_roots(&mut origin);
    starts.push(origin);
    if let Some(warm) = cls_warm_start(sample, p) {
        starts.push(warm);
    }
    let mut rng = options.seed.rng();
    for _ in 0..options.random_starts {
        let mut point: Vec<Complex64> = (0..p)
            .map(|_| {
                let u: f64 = rand::Rng::random(&mut rng);
                let th: f64 = rand::Rng::random::<f64>(&mut rng) * 2.0 * std::f64::consts::PI;
                Complex64::from_polar(0.8 * u.sqrt(), th)
            })
            .collect();
        separate_roots(&mut point);
        starts.push(point);
    }

    let mut best: Option<(Vec<f64>, f64, usize, bool)> = None;
    let restarts_used = starts.len();
    for start in &starts {
        let x0 = pack(start);
        let run = nelder_mead(&objective, &x0, 0.05, options.max_iters);
        let better = match &best {
            Some((_, f_best, _, _)) => run.1 < *f_best,
            None => true,
        };
        if better {
            best = Some(run);
        }
    }
    let (x, fx, iterations, converged) = best.expect("at least one start");
    let mut roots = unpack(&x);
    for r in &mut roots {
        if r.norm() > MLE_BARRIER {
            *r *= MLE_BARRIER / r.norm();
        }
    }
    separate_roots(&mut roots);
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    Ok(MleResult {
        roots: ArRoots::new(roots)?,
        loglik: -fx,
        converged,
        iterations,
        restarts_used,
    })
}

/// Random-walk Metropolis options.
#[derive(Debug, Clone)]
pub struct McmcOptions {
    pub burn_in: usize,
    pub keep: usize,
    pub thinning: usize,
    /// Initial proposal standard deviation per real coordinate.
    pub initial_step: f64,
    /// Steps between scale adaptations during burn-in.
    pub adapt_interval: usize,
}

impl Default for McmcOptions {
    fn default() -> Self {
        Self {
            burn_in: 2000,
            keep: 4000,
            thinning: 2,
            initial_step: 0.1,
            adapt_interval: 100,
        }
    }
}

/// Posterior draws from a Metropolis chain over Θ̃₁.
#[derive(Debug, Clone)]
pub struct PosteriorDraws {
    pub draws: Vec<ArRoots>,
    /// Zero for MCMC output; kept for weighted reuse of the container.
    pub log_weights: Vec<f64>,
    pub acceptance_rate: f64,
    pub burn_in: usize,
    pub thinning: usize,
    /// Smallest effective sample size across the 2p real coordinates.
    pub ess: f64,
    /// Set when the ESS estimate falls below 50.
    pub ess_warning: bool,
}

/// Samples the posterior ∝ exp(exact log-likelihood) · π(ξ) by random-walk
/// Metropolis in the 2p real root coordinates. The proposal scale adapts
/// toward acceptance in [0.2, 0.5] during burn-in and is frozen afterwards,
/// preserving detailed balance for the kept draws. Reproducible from seed.
pub fn posterior_sample(
    sample: &ComplexSample,
    prior: &PriorSpec,
    p: usize,
    options: &McmcOptions,
    seed: RngSeed,
) -> Result<PosteriorDraws> {
    if !prior.predictive_exists() {
        return Err(CoreError::InvalidPrior { kappa: prior.kappa() });
    }
    let n = sample.len();
    if p == 0 || n < p {
        return Err(CoreError::SampleTooShort { n, p });
    }

    let log_target = |roots: &[Complex64]| -> f64 {
        let lp = log_prior_density(roots, prior);
        if !lp.is_finite() {
            return f64::NEG_INFINITY;
        }
        match ar_log_likelihood(roots, sample) {
            Ok(l) => l + lp,
            Err(_) => f64::NEG_INFINITY,
        }
    };

    // Deterministic start: CLS warm start pulled inside the disk, falling
    // back to a small ring around the origin.
    let mut current: Vec<Complex64> = cls_warm_start(sample, p)
        .filter(|roots| log_target(roots).is_finite())
        .unwrap_or_else(|| {
            (0..p)
                .map(|i| Complex64::from_polar(0.05 + 0.03 * i as f64, 1.3 * i as f64))
                .collect()
        });
    let mut current_lp = log_target(&current);
    if !current_lp.is_finite() {
        current = (0..p)
            .map(|i| Complex64::from_polar(0.05 + 0.03 * i as f64, 1.3 * i as f64))
            .collect();
        current_lp = log_target(&current);
    }

    let mut rng = seed.rng();
    let mut step = options.initial_step;
    let total_kept_iters = options.keep * options.thinning.max(1);
    let mut draws = Vec::with_capacity(options.keep);
    let mut accepted_after_burnin = 0usize;
    let mut window_accepts = 0usize;

    let gauss = |rng: &mut rand_chacha::ChaCha8Rng| -> f64 {
        use rand_distr::{Distribution, StandardNormal};
        StandardNormal.sample(rng)
    };

    for iter in 0..options.burn_in + total_kept_iters {
        let mut proposal = current.clone();
        for z in proposal.iter_mut() {
            *z += Complex64::new(step * gauss(&mut rng), step * gauss(&mut rng));
        }
        let proposal_lp = log_target(&proposal);
        let log_u: f64 = {
            let u: f64 = rand::Rng::random(&mut rng);
            u.ln()
        };
        let accept = proposal_lp.is_finite() && log_u < proposal_lp - current_lp;
        if accept {
            current = proposal;
            current_lp = proposal_lp;
            window_accepts += 1;
            if iter >= options.burn_in {
                accepted_after_burnin += 1;
            }
        }
        let in_burnin = iter < options.burn_in;
        if in_burnin && options.adapt_interval > 0 && (iter + 1) % options.adapt_interval == 0 {
            let rate = window_accepts as f64 / options.adapt_interval as f64;
            if rate < 0.2 {
                step /= 1.3;
            } else if rate > 0.5 {
                step *= 1.3;
            }
            window_accepts = 0;
        } else if !in_burnin && (iter + 1 - options.burn_in) % options.thinning.max(1) == 0 {
            draws.push(ArRoots::new(current.clone()).expect("draw lies in the support"));
        }
    }

    let acceptance_rate = accepted_after_burnin as f64 / total_kept_iters.max(1) as f64;
    let ess = min_coordinate_ess(&draws, p);
    Ok(PosteriorDraws {
        log_weights: vec![0.0; draws.len()],
        draws,
        acceptance_rate,
        burn_in: options.burn_in,
        thinning: options.thinning,
        ess,
        ess_warning: ess < 50.0,
    })
}

/// Effective sample size by the initial-positive-sequence truncation of the
/// autocorrelation, minimized over the 2p real coordinates.
fn min_coordinate_ess(draws: &[ArRoots], p: usize) -> f64 {
    if draws.len() < 4 {
        return draws.len() as f64;
    }
    let m = draws.len();
    let mut worst = f64::INFINITY;
    for coord in 0..2 * p {
        let series: Vec<f64> = draws
            .iter()
            .map(|d| {
                let z = d.roots()[coord / 2];
                if coord % 2 == 0 {
                    z.re
                } else {
                    z.im
                }
            })
            .collect();
        let mean = series.iter().sum::<f64>() / m as f64;
        let var = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m as f64;
        if var <= 0.0 {
            continue;
        }
        let mut tau = 1.0;
        for lag in 1..m / 2 {
            let mut acf = 0.0;
            for t in lag..m {
                acf += (series[t] - mean) * (series[t - lag] - mean);
            }
            acf /= m as f64 * var;
            if acf <= 0.0 {
                break;
            }
            tau += 2.0 * acf;
        }
        worst = worst.min(m as f64 / tau);
    }
    if worst.is_finite() {
        worst
    } else {
        m as f64
    }
}

/// Bayesian predictive spectral density: the pointwise average of S(ω|ξ)
/// over posterior draws (weighted if log-weights are present). A mixture of
/// stationary spectra, so itself a stationary spectral density.
pub fn predictive_psd(draws: &PosteriorDraws, m: usize) -> Result<SpectralGrid> {
    predictive_psd_on(&uniform_omegas(m), draws)
}

/// [`predictive_psd`] on a caller-supplied frequency grid.
pub fn predictive_psd_on(omegas: &[f64], draws: &PosteriorDraws) -> Result<SpectralGrid> {
    if draws.draws.len() < 100 {
        return Err(CoreError::TooFewDraws {
            got: draws.draws.len(),
            need: 100,
        });
    }
    let max_logw = draws
        .log_weights
        .iter()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let weights: Vec<f64> = draws.log_weights.iter().map(|&w| (w - max_logw).exp()).collect();
    let total: f64 = weights.iter().sum();

    let cos_sin: Vec<(f64, f64)> = omegas.iter().map(|&w| (w.cos(), w.sin())).collect();
    let mut values = vec![0.0f64; omegas.len()];
    for (draw, &weight) in draws.draws.iter().zip(&weights) {
        accumulate_ar_psd(draw.roots(), &cos_sin, weight, &mut values);
    }
    let norm = 1.0 / (2.0 * std::f64::consts::PI * total);
    for v in &mut values {
        *v *= norm;
    }
    SpectralGrid::from_parts(omegas.to_vec(), values)
}

/// Adds weight / ∏ᵢ |1 − ξⁱ e^{−iω}|² at every grid point.
#[inline]
fn accumulate_ar_psd(roots: &[Complex64], cos_sin: &[(f64, f64)], weight: f64, out: &mut [f64]) {
    match roots {
        // AR(1) unrolled: this is the risk laboratory's hot loop.
        [xi] => {
            let (a, b) = (xi.re, xi.im);
            let one_plus = 1.0 + a * a + b * b;
            for ((c, s), v) in cos_sin.iter().zip(out.iter_mut()) {
                // |1 - xi e^{-iw}|^2 = 1 + |xi|^2 - 2(a cos w + b sin w).
                let denom = one_plus - 2.0 * (a * c + b * s);
                *v += weight / denom;
            }
        }
        _ => {
            for ((c, s), v) in cos_sin.iter().zip(out.iter_mut()) {
                let mut denom = 1.0;
                for xi in roots {
                    let re = 1.0 - (xi.re * c + xi.im * s);
                    let im = xi.im * c - xi.re * s;
                    denom *= re * re + im * im;
                }
                *v += weight / denom;
            }
        }
    }
}

/// Plug-in spectral density at the maximum likelihood estimate.
pub fn estimative_psd(fit: &MleResult) -> Psd {
    psd_from_roots(&fit.roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{exact_log_likelihood, sample_ar_path};
    use crate::spectral::autocovariances_with_grid;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mle_on_white_noise_stays_near_origin() {
        let n = 512;
        let truth = ArRoots::single(Complex64::ZERO).unwrap();
        let sample = sample_ar_path(&truth, n, RngSeed::new(61)).unwrap();
        let fit = mle(&sample, 1, &MleOptions::default()).unwrap();
        assert!(fit.converged);
        assert!(fit.roots.roots()[0].norm() < 3.0 / (n as f64).sqrt());
    }

    #[test]
    fn mle_recovers_ar1_root() {
        let truth = ArRoots::single(c(0.5, 0.0)).unwrap();
        let sample = sample_ar_path(&truth, 1024, RngSeed::new(62)).unwrap();
        let fit = mle(&sample, 1, &MleOptions::default()).unwrap();
        let err = (fit.roots.roots()[0] - c(0.5, 0.0)).norm();
        assert!(err < 0.1, "err {err}");
        // Conditional-least-squares oracle: xi_hat = sum z_t conj(z_{t-1}) /
        // sum |z_{t-1}|^2 for p = 1; the MLE should sit close to it.
        let z = sample.values();
        let num: Complex64 = (1..z.len()).map(|t| z[t] * z[t - 1].conj()).sum();
        let den: f64 = (0..z.len() - 1).map(|t| z[t].norm_sqr()).sum();
        let cls = num / den;
        assert!((fit.roots.roots()[0] - cls).norm() < 0.05);
        // And the reported loglik is at least the value at the CLS point.
        let at_cls = exact_log_likelihood(&ArRoots::single(cls).unwrap(), &sample).unwrap();
        assert!(fit.loglik >= at_cls - 1e-9);
    }

    #[test]
    fn mle_recovers_two_roots_up_to_pairing() {
        let truth = ArRoots::new(vec![c(0.5, 0.0), c(-0.5, 0.0)]).unwrap();
        let sample = sample_ar_path(&truth, 4096, RngSeed::new(63)).unwrap();
        let fit = mle(&sample, 2, &MleOptions::default()).unwrap();
        // Canonical order sorts by real part, so pairing is direct here.
        let got = fit.roots.roots();
        assert!((got[0] - c(-0.5, 0.0)).norm() < 0.1, "{got:?}");
        assert!((got[1] - c(0.5, 0.0)).norm() < 0.1, "{got:?}");
    }

    #[test]
    fn whittle_objective_round_trips_through_psd() {
        let truth = ArRoots::single(c(0.6, 0.1)).unwrap();
        let sample = sample_ar_path(&truth, 256, RngSeed::new(64)).unwrap();
        let options = MleOptions {
            objective: Objective::Whittle,
            ..Default::default()
        };
        let fit = mle(&sample, 1, &options).unwrap();
        let value = whittle_log_likelihood(&estimative_psd(&fit), &sample).unwrap();
        assert!((value - fit.loglik).abs() < 1e-9);
    }

    #[test]
    fn posterior_centers_on_origin_for_white_noise() {
        let sample = sample_ar_path(&ArRoots::single(Complex64::ZERO).unwrap(), 512, RngSeed::new(65))
            .unwrap();
        let draws = posterior_sample(
            &sample,
            &PriorSpec::Kappa(-1.0),
            1,
            &McmcOptions::default(),
            RngSeed::new(66),
        )
        .unwrap();
        assert!(draws.acceptance_rate > 0.05 && draws.acceptance_rate < 0.95);
        let mean: Complex64 =
            draws.draws.iter().map(|d| d.roots()[0]).sum::<Complex64>() / draws.draws.len() as f64;
        let sd = (draws
            .draws
            .iter()
            .map(|d| (d.roots()[0] - mean).norm_sqr())
            .sum::<f64>()
            / draws.draws.len() as f64)
            .sqrt();
        assert!(mean.norm() < 3.0 * sd, "mean {mean}, sd {sd}");
        assert!(!draws.ess_warning, "ess {}", draws.ess);
    }

    #[test]
    fn posterior_runs_at_minimal_sample_size() {
        // kappa < 2 keeps the predictive well-defined even at N = p = 1
        // scale; N = 3 here.
        let sample = ComplexSample::new(vec![c(0.3, 0.1), c(-0.2, 0.4), c(0.1, -0.6)]).unwrap();
        let draws = posterior_sample(
            &sample,
            &PriorSpec::Kappa(-1.0),
            1,
            &McmcOptions {
                burn_in: 500,
                keep: 500,
                thinning: 1,
                ..Default::default()
            },
            RngSeed::new(67),
        )
        .unwrap();
        assert_eq!(draws.draws.len(), 500);
        assert!(draws.draws.iter().all(|d| d.max_modulus() < 1.0));
    }

    #[test]
    fn kappa_at_threshold_is_rejected() {
        let sample = sample_ar_path(&ArRoots::single(Complex64::ZERO).unwrap(), 32, RngSeed::new(68))
            .unwrap();
        let err = posterior_sample(
            &sample,
            &PriorSpec::Kappa(2.0),
            1,
            &McmcOptions::default(),
            RngSeed::new(69),
        );
        assert!(matches!(err, Err(CoreError::InvalidPrior { .. })));
    }

    #[test]
    fn chains_are_seed_deterministic() {
        let sample = sample_ar_path(&ArRoots::single(c(0.4, 0.0)).unwrap(), 64, RngSeed::new(70))
            .unwrap();
        let opts = McmcOptions {
            burn_in: 200,
            keep: 300,
            thinning: 2,
            ..Default::default()
        };
        let a = posterior_sample(&sample, &PriorSpec::Jeffreys, 1, &opts, RngSeed::new(71)).unwrap();
        let b = posterior_sample(&sample, &PriorSpec::Jeffreys, 1, &opts, RngSeed::new(71)).unwrap();
        assert_eq!(a.draws.len(), b.draws.len());
        for (x, y) in a.draws.iter().zip(&b.draws) {
            assert_eq!(x.roots(), y.roots());
        }
        assert_eq!(a.acceptance_rate, b.acceptance_rate);
    }

    #[test]
    fn shrinkage_prior_pulls_posterior_toward_origin() {
        // Paired-seed comparison: under the kappa = -1 prior the posterior
        // mean modulus should not exceed the Jeffreys one in most runs.
        let truth = ArRoots::single(c(0.8, 0.0)).unwrap();
        let opts = McmcOptions {
            burn_in: 500,
            keep: 1000,
            thinning: 1,
            ..Default::default()
        };
        let mut wins = 0;
        let total = 20;
        for s in 0..total {
            let data_seed = RngSeed::with_stream(72, s);
            let sample = sample_ar_path(&truth, 256, data_seed).unwrap();
            let chain_seed = RngSeed::with_stream(73, s);
            let shrunk =
                posterior_sample(&sample, &PriorSpec::Kappa(-1.0), 1, &opts, chain_seed).unwrap();
            let jeffreys =
                posterior_sample(&sample, &PriorSpec::Jeffreys, 1, &opts, chain_seed).unwrap();
            let mean_abs = |d: &PosteriorDraws| {
                d.draws.iter().map(|r| r.roots()[0].norm()).sum::<f64>() / d.draws.len() as f64
            };
            if mean_abs(&shrunk) <= mean_abs(&jeffreys) {
                wins += 1;
            }
        }
        assert!(wins >= 16, "shrinkage direction held in only {wins}/{total} runs");
    }

    #[test]
    fn predictive_psd_degenerate_and_symmetric_mixtures() {
        let xi = c(0.5, 0.0);
        let make_draws = |roots: Vec<ArRoots>| PosteriorDraws {
            log_weights: vec![0.0; roots.len()],
            draws: roots,
            acceptance_rate: 0.3,
            burn_in: 0,
            thinning: 1,
            ess: 1000.0,
            ess_warning: false,
        };
        // All draws identical: the mixture is exactly S_xi.
        let draws = make_draws(vec![ArRoots::single(xi).unwrap(); 200]);
        let grid = predictive_psd(&draws, 256).unwrap();
        let truth = psd_from_roots(&ArRoots::single(xi).unwrap());
        for (&w, &v) in grid.omegas().iter().zip(grid.values()) {
            assert!((v - truth.value(w)).abs() < 1e-14);
        }
        // Two symmetric roots: mixture is even in omega.
        let mut mixture = vec![ArRoots::single(xi).unwrap(); 100];
        mixture.extend(vec![ArRoots::single(-xi).unwrap(); 100]);
        let draws = make_draws(mixture);
        let grid = predictive_psd(&draws, 256).unwrap();
        let plus = psd_from_roots(&ArRoots::single(xi).unwrap());
        let minus = psd_from_roots(&ArRoots::single(-xi).unwrap());
        for (&w, &v) in grid.omegas().iter().zip(grid.values()) {
            let expect = 0.5 * (plus.value(w) + minus.value(w));
            assert!((v - expect).abs() < 1e-14);
            let mirrored = 0.5 * (plus.value(-w) + minus.value(-w));
            assert!((v - mirrored).abs() < 1e-12);
        }
    }

    #[test]
    fn predictive_psd_matches_herglotz_average() {
        // gamma_0 of the mixture equals the draw-average of 1/(1-|xi|^2).
        let sample = sample_ar_path(&ArRoots::single(c(0.5, 0.0)).unwrap(), 128, RngSeed::new(74))
            .unwrap();
        let draws = posterior_sample(
            &sample,
            &PriorSpec::Kappa(-1.0),
            1,
            &McmcOptions {
                burn_in: 500,
                keep: 500,
                thinning: 2,
                ..Default::default()
            },
            RngSeed::new(75),
        )
        .unwrap();
        let m = 4096;
        let grid = predictive_psd(&draws, m).unwrap();
        let gamma0 = 2.0 * std::f64::consts::PI * grid.mean();
        let expect = draws
            .draws
            .iter()
            .map(|d| 1.0 / (1.0 - d.roots()[0].norm_sqr()))
            .sum::<f64>()
            / draws.draws.len() as f64;
        assert!((gamma0 - expect).abs() < 1e-8 * expect, "{gamma0} vs {expect}");
        // Cross-check through the quadrature autocovariance helper.
        let psd_vals = grid.values().to_vec();
        let _ = autocovariances_with_grid;
        let gamma0_quad = psd_vals.iter().sum::<f64>() / psd_vals.len() as f64
            * 2.0
            * std::f64::consts::PI;
        assert!((gamma0_quad - gamma0).abs() < 1e-12);
    }

    #[test]
    fn too_few_draws_is_an_error() {
        let draws = PosteriorDraws {
            draws: vec![ArRoots::single(c(0.2, 0.0)).unwrap(); 10],
            log_weights: vec![0.0; 10],
            acceptance_rate: 0.3,
            burn_in: 0,
            thinning: 1,
            ess: 10.0,
            ess_warning: true,
        };
        assert!(matches!(
            predictive_psd(&draws, 64),
            Err(CoreError::TooFewDraws { .. })
        ));
    }

    #[test]
    fn estimative_psd_is_plug_in() {
        let truth = ArRoots::single(c(0.5, 0.0)).unwrap();
        let sample = sample_ar_path(&truth, 512, RngSeed::new(76)).unwrap();
        let fit = mle(&sample, 1, &MleOptions::default()).unwrap();
        let psd = estimative_psd(&fit);
        let direct = psd_from_roots(&fit.roots);
        assert!((psd.value(0.3) - direct.value(0.3)).abs() < 1e-15);
    }
}
