//! `specshrink fit`: maximum-likelihood or Bayesian fit of a sample file,
//! with a JSON summary on stdout.

use std::path::PathBuf;
use std::process::ExitCode;

use num_complex::Complex64;
use serde::Serialize;
use specshrink_core::geometry::PriorSpec;
use specshrink_core::inference::{mle, posterior_sample, McmcOptions, MleOptions};
use specshrink_core::rng::RngSeed;

use crate::config::{require, resolve, FlatConfig};
use crate::manifest::config_hash;
use crate::sample_file::read_sample;

#[derive(Serialize)]
struct FitSummary {
    command: &'static str,
    method: String,
    p: usize,
    n: usize,
    kappa: Option<f64>,
    seed: u64,
    config_hash: String,
    mle: MleSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    posterior: Option<PosteriorSummary>,
}

#[derive(Serialize)]
struct MleSummary {
    roots: Vec<[f64; 2]>,
    abs_roots: Vec<f64>,
    loglik: f64,
    converged: bool,
    iterations: usize,
    restarts_used: usize,
}

#[derive(Serialize)]
struct PosteriorSummary {
    mean_roots: Vec<[f64; 2]>,
    mean_abs_root: f64,
    acceptance_rate: f64,
    ess: f64,
    ess_warning: bool,
    draws: usize,
    burn_in: usize,
    thinning: usize,
}

#[allow(clippy::too_many_arguments)]
pub fn run(
    config: &FlatConfig,
    method: Option<String>,
    kappa: Option<f64>,
    p: Option<usize>,
    input: Option<PathBuf>,
    seed: Option<u64>,
    burn_in: Option<usize>,
    keep: Option<usize>,
    thin: Option<usize>,
) -> Result<ExitCode, String> {
    let method: String = resolve(method, config, "method", "mle".to_string())?;
    let p: usize = resolve(p, config, "p", 1)?;
    let input: PathBuf = require(input, config, "in")?;
    let seed = crate::effective_seed(seed, config)?;
    let kappa: f64 = resolve(kappa, config, "kappa", -1.0)?;

    let is_bayes = match method.as_str() {
        "mle" => false,
        "bayes" => true,
        other => return Err(format!("unknown method {other:?}; use mle or bayes")),
    };
    if is_bayes && kappa >= 2.0 {
        eprintln!(
            "error: kappa = {kappa} is not admissible; the Bayesian predictive \
             density exists only for kappa < 2"
        );
        return Ok(ExitCode::from(2));
    }

    let sample = read_sample(&input)?;
    let hash = config_hash(&format!(
        "fit method={method} p={p} kappa={kappa} seed={seed} n={}",
        sample.len()
    ));

    let fit = mle(
        &sample,
        p,
        &MleOptions {
            seed: RngSeed::with_stream(seed, 1),
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let mle_summary = MleSummary {
        roots: fit.roots.roots().iter().map(|z| [z.re, z.im]).collect(),
        abs_roots: fit.roots.roots().iter().map(|z| z.norm()).collect(),
        loglik: fit.loglik,
        converged: fit.converged,
        iterations: fit.iterations,
        restarts_used: fit.restarts_used,
    };

    let posterior = if is_bayes {
        let options = McmcOptions {
            burn_in: resolve(burn_in, config, "burn-in", 2000)?,
            keep: resolve(keep, config, "keep", 4000)?,
            thinning: resolve(thin, config, "thin", 2)?,
            ..Default::default()
        };
        let prior = PriorSpec::Kappa(kappa);
        let draws = posterior_sample(&sample, &prior, p, &options, RngSeed::with_stream(seed, 2))
            .map_err(|e| e.to_string())?;
        // Posterior means over canonically sorted draws; root labels are
        // not identifiable for p >= 2, so means are reported on the sorted
        // representative.
        let mut mean = vec![Complex64::ZERO; p];
        let mut mean_abs = 0.0f64;
        for d in &draws.draws {
            let mut sorted = d.roots().to_vec();
            sorted.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
            for (m, z) in mean.iter_mut().zip(&sorted) {
                *m += z;
            }
            mean_abs += d.roots().iter().map(|z| z.norm()).sum::<f64>() / p as f64;
        }
        let count = draws.draws.len() as f64;
        Some(PosteriorSummary {
            mean_roots: mean.iter().map(|z| [z.re / count, z.im / count]).collect(),
            mean_abs_root: mean_abs / count,
            acceptance_rate: draws.acceptance_rate,
            ess: draws.ess,
            ess_warning: draws.ess_warning,
            draws: draws.draws.len(),
            burn_in: draws.burn_in,
            thinning: draws.thinning,
        })
    } else {
        None
    };

    let summary = FitSummary {
        command: "fit",
        method,
        p,
        n: sample.len(),
        kappa: if is_bayes { Some(kappa) } else { None },
        seed,
        config_hash: hash,
        mle: mle_summary,
        posterior,
    };
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
    Ok(ExitCode::SUCCESS)
}
