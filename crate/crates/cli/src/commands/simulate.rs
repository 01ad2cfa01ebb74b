//! `specshrink simulate`: draw an AR path and write it as a sample file.

use std::path::PathBuf;
use std::process::ExitCode;

use specshrink_core::gaussian::sample_ar_path;
use specshrink_core::rng::RngSeed;
use specshrink_core::spectral::ArRoots;

use crate::config::{require, resolve, FlatConfig};
use crate::sample_file::write_sample;

pub fn run(
    config: &FlatConfig,
    p: Option<usize>,
    roots: Option<String>,
    n: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> Result<ExitCode, String> {
    let roots_raw: String = require(roots, config, "roots")?;
    let n: usize = require(n, config, "n")?;
    let seed = crate::effective_seed(seed, config)?;
    let out: PathBuf = resolve(out, config, "out", PathBuf::from("sample.txt"))?;

    let parsed = super::parse_roots(&roots_raw)?;
    // `p` is redundant next to --roots; reject inconsistency instead of
    // silently preferring one.
    let declared_p: usize = resolve(p, config, "p", parsed.len())?;
    if declared_p != parsed.len() {
        eprintln!("error: --p {declared_p} disagrees with {} roots", parsed.len());
        return Ok(ExitCode::from(2));
    }
    let ar_roots = match ArRoots::new(parsed) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(2));
        }
    };
    let sample = match sample_ar_path(&ar_roots, n, RngSeed::new(seed)) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(2));
        }
    };
    write_sample(&out, &sample, seed)?;
    println!("{}", out.display());
    Ok(ExitCode::SUCCESS)
}
