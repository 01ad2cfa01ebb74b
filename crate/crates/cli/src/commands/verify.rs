//! `specshrink verify`: numeric verification of the geometric identities,
//! one residual line per check, exit 1 on any failure.

use std::process::ExitCode;

use specshrink_core::geometry::{
    alpha_parallel_check, eigenfunction_residual, fisher_metric_ar, hermite_moment_check,
    inner_product, jacobi_residual, orthogonal_part_h, parallel_part_g, prior_normalizer,
    random_theta1_points, Normalizer, PriorSpec,
};
use specshrink_core::rng::RngSeed;

use crate::config::{resolve, FlatConfig};

struct Check {
    name: String,
    residual: f64,
    tolerance: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.residual < self.tolerance
    }
}

pub fn run(
    config: &FlatConfig,
    p: Option<usize>,
    seed: Option<u64>,
    phi_exponent: f64,
) -> Result<ExitCode, String> {
    let p: usize = resolve(p, config, "p", 1)?;
    if !(1..=3).contains(&p) {
        eprintln!("error: --p must be 1, 2, or 3");
        return Ok(ExitCode::from(2));
    }
    let seed = crate::effective_seed(seed, config)?;
    let master = RngSeed::new(seed);
    let mut checks: Vec<Check> = Vec::new();

    // Eigenvalue of the Laplacian on the candidate eigenfunction; the
    // eigenvalue -p(p+1) is verified, never assumed.
    let k = p * (p + 1);
    let eig_tol = [1e-5, 1e-4, 1e-3][p - 1];
    let residual = eigenfunction_residual(p, 50, master.substream(1), phi_exponent)
        .map_err(|e| e.to_string())?;
    println!("eigenfunction: p = {p}, K = {k}");
    checks.push(Check {
        name: format!("eigenfunction residual (p={p}, K={k})"),
        residual,
        tolerance: eig_tol,
    });

    // Jacobi formula at random interior points.
    let mut worst = 0.0f64;
    for roots in random_theta1_points(p, 20, 0.85, 0.05, master.substream(2)) {
        worst = worst.max(jacobi_residual(&roots).map_err(|e| e.to_string())?);
    }
    checks.push(Check {
        name: format!("jacobi formula (p={p})"),
        residual: worst,
        tolerance: 1e-6,
    });

    // The remaining suites run at the highest supported order <= p.
    let pq = p.min(2);

    let mut worst = 0.0f64;
    for roots in random_theta1_points(pq, 20, 0.85, 0.05, master.substream(3)) {
        worst = worst.max(alpha_parallel_check(&roots).map_err(|e| e.to_string())?);
    }
    checks.push(Check {
        name: format!("alpha-parallel identity (p={pq})"),
        residual: worst,
        tolerance: 1e-6,
    });

    let metric_point = random_theta1_points(pq, 1, 0.7, 0.1, master.substream(4))
        .pop()
        .expect("one point");
    let metric = fisher_metric_ar(&metric_point).map_err(|e| e.to_string())?;
    let hermite =
        hermite_moment_check(&metric, 200_000, master.substream(5)).map_err(|e| e.to_string())?;
    checks.push(Check {
        name: format!("hermite moments, max z over {} rows (p={pq})", hermite.rows.len()),
        residual: hermite.max_z_score(),
        tolerance: 4.0,
    });

    // Properness: closed p = 1 values and the kappa = 1 divergence ladder.
    let mut worst = 0.0f64;
    for kappa in [-1.0, 0.0, 0.5] {
        let expect = std::f64::consts::PI / (1.0 - kappa);
        match prior_normalizer(&PriorSpec::Kappa(kappa), 1, master.substream(6))
            .map_err(|e| e.to_string())?
        {
            Normalizer::Finite { value, .. } => worst = worst.max((value - expect).abs()),
            Normalizer::Divergent { .. } => worst = f64::INFINITY,
        }
    }
    checks.push(Check {
        name: "prior normalizer, p=1, kappa in {-1, 0, 1/2}".to_string(),
        residual: worst,
        tolerance: 1e-6,
    });
    let diverged = matches!(
        prior_normalizer(&PriorSpec::Kappa(1.0), 1, master.substream(6))
            .map_err(|e| e.to_string())?,
        Normalizer::Divergent { .. }
    );
    checks.push(Check {
        name: "jeffreys prior divergence detected (kappa=1)".to_string(),
        residual: if diverged { 0.0 } else { 1.0 },
        tolerance: 0.5,
    });

    // Parallel-part vanishing under the kappa = -1 prior, and the
    // orthogonality of the parallel and orthogonal parts.
    let m = 2048;
    let mut sup_g = 0.0f64;
    let mut max_ip = 0.0f64;
    for roots in random_theta1_points(pq, 10, 0.85, 0.05, master.substream(7)) {
        let g = parallel_part_g(&roots, &PriorSpec::Kappa(-1.0), m).map_err(|e| e.to_string())?;
        sup_g = sup_g.max(g.values().iter().fold(0.0f64, |a, &v| a.max(v.abs())));
        let h = orthogonal_part_h(&roots, m).map_err(|e| e.to_string())?;
        for kappa in [-1.0, 0.0] {
            let gk = parallel_part_g(&roots, &PriorSpec::Kappa(kappa), m)
                .map_err(|e| e.to_string())?;
            max_ip = max_ip.max(inner_product(&roots, &gk, &h).map_err(|e| e.to_string())?.abs());
        }
    }
    checks.push(Check {
        name: format!("parallel part vanishes at kappa=-1 (p={pq})"),
        residual: sup_g,
        tolerance: 1e-8,
    });
    checks.push(Check {
        name: format!("<G, H> orthogonality (p={pq})"),
        residual: max_ip,
        tolerance: 1e-8,
    });

    let mut all_passed = true;
    for check in &checks {
        let status = if check.passed() { "pass" } else { "FAIL" };
        println!(
            "{status}  {:<48} residual {:>12.3e}  tolerance {:.1e}",
            check.name, check.residual, check.tolerance
        );
        all_passed &= check.passed();
    }
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
