//! Command-line front end: simulate complex AR paths, fit them by maximum
//! likelihood or posterior sampling, run risk-difference scans with CSV/SVG
//! output, and verify the geometric identities.
//!
//! Exit codes: 0 success, 1 failed verification check, 2 invalid input,
//! 3 worker panic during a scan.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod manifest;
mod sample_file;
mod svg;

use config::FlatConfig;

#[derive(Parser)]
#[command(
    name = "specshrink",
    version,
    about = "Shrinkage-prior spectral estimation for complex AR processes"
)]
struct Cli {
    /// Optional flat key = value config file; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a complex AR path and write it as a sample file.
    Simulate {
        /// AR order; inferred from --roots when omitted.
        #[arg(long)]
        p: Option<usize>,
        /// Roots as re,im pairs separated by ':' (e.g. "0.5,0:0.1,-0.2").
        #[arg(long)]
        roots: Option<String>,
        /// Path length.
        #[arg(long)]
        n: Option<usize>,
        /// Master seed (SPECSHRINK_SEED overrides).
        #[arg(long)]
        seed: Option<u64>,
        /// Output path.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Fit a sample by maximum likelihood or posterior sampling.
    Fit {
        /// "mle" or "bayes".
        #[arg(long)]
        method: Option<String>,
        /// Prior exponent for --method bayes; kappa = 1 is the Jeffreys prior.
        #[arg(long, allow_negative_numbers = true)]
        kappa: Option<f64>,
        /// AR order.
        #[arg(long)]
        p: Option<usize>,
        /// Input sample file.
        #[arg(long = "in")]
        input: Option<std::path::PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// MCMC burn-in iterations.
        #[arg(long)]
        burn_in: Option<usize>,
        /// Kept MCMC draws.
        #[arg(long)]
        keep: Option<usize>,
        /// Thinning between kept draws.
        #[arg(long)]
        thin: Option<usize>,
    },
    /// Scan the normalized risk difference over a real-xi grid.
    RiskScan {
        /// Comma-separated kappa values (e.g. "-1,0,1").
        #[arg(long, allow_hyphen_values = true)]
        kappa_list: Option<String>,
        /// Path length N.
        #[arg(long)]
        n: Option<usize>,
        /// Grid as start:stop:step (e.g. "-0.9:0.9:0.1").
        #[arg(long, allow_hyphen_values = true)]
        xi_grid: Option<String>,
        /// Paired trials per grid point.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for CSV, SVG, and the run manifest.
        #[arg(long)]
        out_dir: Option<std::path::PathBuf>,
        /// Worker threads; defaults to the logical core count.
        #[arg(long)]
        jobs: Option<usize>,
        /// Quadrature grid for the outer KL divergence.
        #[arg(long)]
        grid_size: Option<usize>,
        #[arg(long)]
        burn_in: Option<usize>,
        #[arg(long)]
        keep: Option<usize>,
        #[arg(long)]
        thin: Option<usize>,
    },
    /// Run the geometric verification suites and report residuals.
    Verify {
        /// AR order of the eigenfunction check (1, 2, or 3).
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Debug hook: exponent applied to the eigenfunction candidate.
        #[arg(long, hide = true, default_value_t = 1.0)]
        phi_exponent: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match FlatConfig::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match cli.command {
        Command::Simulate { p, roots, n, seed, out } => {
            commands::simulate::run(&config, p, roots, n, seed, out)
        }
        Command::Fit {
            method,
            kappa,
            p,
            input,
            seed,
            burn_in,
            keep,
            thin,
        } => commands::fit::run(&config, method, kappa, p, input, seed, burn_in, keep, thin),
        Command::RiskScan {
            kappa_list,
            n,
            xi_grid,
            trials,
            seed,
            out_dir,
            jobs,
            grid_size,
            burn_in,
            keep,
            thin,
        } => commands::risk_scan::run(
            &config,
            commands::risk_scan::Args {
                kappa_list,
                n,
                xi_grid,
                trials,
                seed,
                out_dir,
                jobs,
                grid_size,
                burn_in,
                keep,
                thin,
            },
        ),
        Command::Verify { p, seed, phi_exponent } => {
            commands::verify::run(&config, p, seed, phi_exponent)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Resolves the effective seed: environment override, then flag, then
/// config file, then the default 0.
pub(crate) fn effective_seed(flag: Option<u64>, config: &FlatConfig) -> Result<u64, String> {
    if let Ok(env) = std::env::var("SPECSHRINK_SEED") {
        return env
            .trim()
            .parse()
            .map_err(|_| format!("SPECSHRINK_SEED is not a valid u64: {env}"));
    }
    if let Some(seed) = flag {
        return Ok(seed);
    }
    config.parsed_or("seed", 0)
}
