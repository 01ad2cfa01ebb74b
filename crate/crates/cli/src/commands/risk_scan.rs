//! `specshrink risk-scan`: normalized risk differences over a real-ξ grid,
//! emitted as CSV plus an SVG overlay of the estimates against the
//! pointwise limit curve, all tied to a run manifest.

use std::path::PathBuf;
use std::process::ExitCode;

use num_complex::Complex64;
use specshrink_core::geometry::q_limit;
use specshrink_core::inference::McmcOptions;
use specshrink_core::risk::{scan_domination, ExperimentConfig};
use specshrink_core::rng::RngSeed;

use crate::config::{require, resolve, FlatConfig};
use crate::manifest::{config_hash, now_rfc3339, RunManifest};
use crate::svg::{render_scan, Reference, Series};

pub struct Args {
    pub kappa_list: Option<String>,
    pub n: Option<usize>,
    pub xi_grid: Option<String>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub grid_size: Option<usize>,
    pub burn_in: Option<usize>,
    pub keep: Option<usize>,
    pub thin: Option<usize>,
}

pub fn run(config: &FlatConfig, args: Args) -> Result<ExitCode, String> {
    let kappa_raw: String = resolve(args.kappa_list, config, "kappa-list", "-1".to_string())?;
    let n: usize = require(args.n, config, "n")?;
    let xi_raw: String = resolve(args.xi_grid, config, "xi-grid", "-0.9:0.9:0.1".to_string())?;
    let trials: usize = resolve(args.trials, config, "trials", 500)?;
    let seed = crate::effective_seed(args.seed, config)?;
    let out_dir: PathBuf = resolve(args.out_dir, config, "out-dir", PathBuf::from("scan-out"))?;
    let grid_size: usize = resolve(args.grid_size, config, "grid-size", 4096)?;
    let mcmc = McmcOptions {
        burn_in: resolve(args.burn_in, config, "burn-in", 2000)?,
        keep: resolve(args.keep, config, "keep", 4000)?,
        thinning: resolve(args.thin, config, "thin", 2)?,
        ..Default::default()
    };

    let mut kappas = super::parse_float_list(&kappa_raw)?;
    kappas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if let Some(bad) = kappas.iter().find(|&&k| k >= 2.0) {
        eprintln!(
            "error: kappa = {bad} is not admissible; the Bayesian predictive \
             density exists only for kappa < 2"
        );
        return Ok(ExitCode::from(2));
    }
    let xi_grid = super::parse_grid(&xi_raw)?;
    if xi_grid.iter().any(|x| x.abs() >= 1.0) {
        eprintln!("error: xi grid must stay inside the open unit interval");
        return Ok(ExitCode::from(2));
    }

    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| format!("cannot build worker pool: {e}"))?;
    }

    let canonical = format!(
        "risk-scan kappas={kappas:?} n={n} xi={xi_grid:?} trials={trials} seed={seed} \
         grid={grid_size} burn={} keep={} thin={}",
        mcmc.burn_in, mcmc.keep, mcmc.thinning
    );
    let hash = config_hash(&canonical);
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| format!("cannot create {}: {e}", out_dir.display()))?;
    let csv_path = out_dir.join(format!("risk_scan_n{n}.csv"));
    let svg_path = out_dir.join(format!("risk_scan_n{n}.svg"));
    let manifest_path = out_dir.join("manifest.json");

    let started_at = now_rfc3339();
    let experiment = ExperimentConfig {
        xi_grid: xi_grid.clone(),
        n_values: vec![n],
        kappa_values: kappas.clone(),
        trials,
        grid_size,
        mcmc,
        master_seed: RngSeed::new(seed),
    };
    let scan = match std::panic::catch_unwind(|| scan_domination(&experiment)) {
        Ok(Ok(scan)) => scan,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(2));
        }
        Err(_) => {
            // A worker panicked; remove anything partial so no stale output
            // survives under this configuration.
            let _ = std::fs::remove_file(&csv_path);
            let _ = std::fs::remove_file(&svg_path);
            let _ = std::fs::remove_file(&manifest_path);
            eprintln!("error: a scan worker panicked; partial outputs removed");
            return Ok(ExitCode::from(3));
        }
    };

    // CSV: ascending xi, then kappa.
    let mut csv = String::new();
    csv.push_str(&format!("# manifest={hash}\n"));
    csv.push_str("xi,kappa,n,z_mean,z_stderr,q_limit,trials,excluded_trials\n");
    for (xi_idx, &xi) in scan.xi_grid.iter().enumerate() {
        for (ki, &kappa) in scan.kappa_values.iter().enumerate() {
            let est = &scan.z_estimates[ki][xi_idx];
            let q = q_limit(Complex64::new(xi, 0.0), kappa).map_err(|e| e.to_string())?;
            csv.push_str(&format!(
                "{xi},{kappa},{n},{},{},{q},{},{}\n",
                est.mean, est.stderr, est.trials, est.excluded_trials
            ));
        }
    }
    std::fs::write(&csv_path, &csv)
        .map_err(|e| format!("cannot write {}: {e}", csv_path.display()))?;

    let series: Vec<Series> = scan
        .kappa_values
        .iter()
        .enumerate()
        .map(|(ki, &kappa)| Series {
            label: format!("Z(kappa={kappa}), N={n}"),
            xs: scan.xi_grid.clone(),
            ys: scan.z_estimates[ki].iter().map(|e| e.mean).collect(),
            band: scan.z_estimates[ki].iter().map(|e| 2.0 * e.stderr).collect(),
        })
        .collect();
    let references: Vec<Reference> = scan
        .kappa_values
        .iter()
        .map(|&kappa| Reference {
            label: format!("Q(kappa={kappa})"),
            xs: scan.xi_grid.clone(),
            ys: scan
                .xi_grid
                .iter()
                .map(|&x| q_limit(Complex64::new(x, 0.0), kappa).unwrap())
                .collect(),
        })
        .collect();
    let svg = render_scan(
        &format!("Normalized risk difference vs Jeffreys baseline, N={n}"),
        &hash,
        &series,
        &references,
    );
    std::fs::write(&svg_path, &svg)
        .map_err(|e| format!("cannot write {}: {e}", svg_path.display()))?;

    let manifest = RunManifest {
        config_hash: hash,
        tool_version: env!("CARGO_PKG_VERSION"),
        master_seed: seed,
        started_at,
        finished_at: now_rfc3339(),
        outputs: vec![
            csv_path.display().to_string(),
            svg_path.display().to_string(),
        ],
    };
    manifest.write(&manifest_path)?;

    if let Some((lo, hi)) = scan.domination_interval {
        println!(
            "domination interval (kappa=-1, mean > 0): [{lo}, {hi}]"
        );
    }
    println!("{}", csv_path.display());
    println!("{}", svg_path.display());
    Ok(ExitCode::SUCCESS)
}
