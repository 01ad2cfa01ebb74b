//! End-to-end tests of the `specshrink` binary: exit codes, file formats,
//! JSON summaries, and byte-for-byte reproducibility of scan outputs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_specshrink"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("specshrink-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

#[test]
fn simulate_writes_sample_file() {
    let dir = tmp_dir("simulate");
    let out_path = dir.join("path.txt");
    let out = run(&[
        "simulate",
        "--roots",
        "0.5,0",
        "--n",
        "1024",
        "--seed",
        "7",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# complex-sample v1 n=1024 seed=7");
    assert_eq!(lines.count(), 1024);
}

#[test]
fn simulate_rejects_duplicate_roots() {
    let out = run(&["simulate", "--roots", "0.5,0:0.5,0", "--n", "64", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_str(&out);
    assert!(err.contains("coincide"), "stderr: {err}");
}

#[test]
fn simulate_rejects_nonstationary_roots() {
    let out = run(&["simulate", "--roots", "1.0,0", "--n", "64", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("modulus"));
}

#[test]
fn env_seed_overrides_flag() {
    let dir = tmp_dir("envseed");
    let a = dir.join("a.txt");
    let b = dir.join("b.txt");
    let out = bin()
        .args(["simulate", "--roots", "0.3,0.1", "--n", "32", "--seed", "1"])
        .args(["--out", a.to_str().unwrap()])
        .env("SPECSHRINK_SEED", "99")
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = run(&[
        "simulate", "--roots", "0.3,0.1", "--n", "32", "--seed", "99", "--out",
        b.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn simulate_then_fit_recovers_the_root() {
    let dir = tmp_dir("roundtrip");
    let path = dir.join("sample.txt");
    let out = run(&[
        "simulate", "--roots", "0.5,0", "--n", "1024", "--seed", "21", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&["fit", "--method", "mle", "--p", "1", "--in", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    let summary: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(summary["method"], "mle");
    assert_eq!(summary["mle"]["converged"], true);
    let root = &summary["mle"]["roots"][0];
    let err = ((root[0].as_f64().unwrap() - 0.5).powi(2)
        + root[1].as_f64().unwrap().powi(2))
    .sqrt();
    assert!(err < 0.1, "recovered root error {err}");
}

#[test]
fn fit_mle_on_white_noise_stays_small() {
    let dir = tmp_dir("white");
    let path = dir.join("sample.txt");
    run(&[
        "simulate", "--roots", "0,0", "--n", "512", "--seed", "3", "--out",
        path.to_str().unwrap(),
    ]);
    let out = run(&["fit", "--method", "mle", "--p", "1", "--in", path.to_str().unwrap()]);
    assert!(out.status.success());
    let summary: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(summary["mle"]["abs_roots"][0].as_f64().unwrap() < 0.15);
}

#[test]
fn fit_rejects_kappa_at_existence_threshold() {
    let dir = tmp_dir("threshold");
    let path = dir.join("sample.txt");
    run(&[
        "simulate", "--roots", "0.2,0", "--n", "64", "--seed", "5", "--out",
        path.to_str().unwrap(),
    ]);
    let out = run(&[
        "fit", "--method", "bayes", "--kappa", "2.0", "--p", "1", "--in",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("kappa < 2"), "{}", stderr_str(&out));
}

#[test]
fn fit_bayes_reports_posterior_summary() {
    let dir = tmp_dir("bayes");
    let path = dir.join("sample.txt");
    run(&[
        "simulate", "--roots", "0.8,0", "--n", "256", "--seed", "11", "--out",
        path.to_str().unwrap(),
    ]);
    let out = run(&[
        "fit", "--method", "bayes", "--kappa", "-1", "--p", "1", "--in",
        path.to_str().unwrap(), "--seed", "12", "--burn-in", "500", "--keep", "1000",
        "--thin", "1",
    ]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    let summary: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let posterior = &summary["posterior"];
    let acc = posterior["acceptance_rate"].as_f64().unwrap();
    assert!(acc > 0.0 && acc < 1.0);
    assert!(posterior["ess"].as_f64().unwrap() > 50.0);
    assert_eq!(posterior["draws"], 1000);
    // Shrinkage direction on boundary-ish data: posterior mean modulus at
    // kappa = -1 should not exceed the MLE modulus for this seed.
    let post_abs = posterior["mean_abs_root"].as_f64().unwrap();
    let mle_abs = summary["mle"]["abs_roots"][0].as_f64().unwrap();
    assert!(post_abs <= mle_abs + 0.05, "post {post_abs} vs mle {mle_abs}");
}

#[test]
fn risk_scan_outputs_are_reproducible() {
    let dir = tmp_dir("scan");
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    let scan_args = |out_dir: &Path| {
        vec![
            "risk-scan".to_string(),
            "--kappa-list".into(),
            "-1,1".into(),
            "--n".into(),
            "16".into(),
            "--xi-grid".into(),
            "-0.2:0.2:0.2".into(),
            "--trials".into(),
            "20".into(),
            "--seed".into(),
            "9".into(),
            "--grid-size".into(),
            "256".into(),
            "--burn-in".into(),
            "100".into(),
            "--keep".into(),
            "150".into(),
            "--thin".into(),
            "1".into(),
            "--out-dir".into(),
            out_dir.display().to_string(),
        ]
    };
    let out = bin().args(scan_args(&out_a)).output().unwrap();
    assert!(out.status.success(), "{}", stderr_str(&out));
    let out = bin().args(scan_args(&out_b)).output().unwrap();
    assert!(out.status.success());

    let csv_a = std::fs::read_to_string(out_a.join("risk_scan_n16.csv")).unwrap();
    let csv_b = std::fs::read_to_string(out_b.join("risk_scan_n16.csv")).unwrap();
    assert_eq!(csv_a, csv_b, "CSV must be byte-identical across reruns");
    let svg_a = std::fs::read(out_a.join("risk_scan_n16.svg")).unwrap();
    let svg_b = std::fs::read(out_b.join("risk_scan_n16.svg")).unwrap();
    assert_eq!(svg_a, svg_b, "SVG must be byte-identical across reruns");

    // Header, column层, and the manifest reference.
    let mut lines = csv_a.lines();
    let manifest_line = lines.next().unwrap();
    assert!(manifest_line.starts_with("# manifest="));
    assert_eq!(
        lines.next().unwrap(),
        "xi,kappa,n,z_mean,z_stderr,q_limit,trials,excluded_trials"
    );
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_a.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(
        format!("# manifest={}", manifest["config_hash"].as_str().unwrap()),
        manifest_line
    );

    // kappa = -1 rows carry the constant limit 4; kappa = 1 rows are exact
    // zeros. Rows are ordered by ascending xi, then kappa.
    let mut xi_seen = Vec::new();
    for line in csv_a.lines().skip(2) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 8);
        let (xi, kappa): (f64, f64) = (cols[0].parse().unwrap(), cols[1].parse().unwrap());
        if kappa == -1.0 {
            assert_eq!(cols[5], "4");
            xi_seen.push(xi);
        } else {
            assert_eq!(cols[3], "0", "z_mean for kappa=1: {line}");
            assert_eq!(cols[4], "0", "z_stderr for kappa=1: {line}");
        }
        assert_eq!(cols[2], "16");
        assert_eq!(cols[6], "20");
        assert_eq!(cols[7], "0");
    }
    assert_eq!(xi_seen, vec![-0.2, 0.0, 0.2]);
}

#[test]
fn risk_scan_rejects_inadmissible_kappa() {
    let dir = tmp_dir("badkappa");
    let out = run(&[
        "risk-scan", "--kappa-list", "2.5", "--n", "16", "--trials", "4", "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes_for_all_orders() {
    for p in ["1", "2"] {
        let out = run(&["verify", "--p", p, "--seed", "13"]);
        assert!(
            out.status.success(),
            "verify --p {p}: {}\n{}",
            stdout_str(&out),
            stderr_str(&out)
        );
        let text = stdout_str(&out);
        assert!(text.contains("pass"));
        assert!(!text.contains("FAIL"));
    }
    // K is reported, not assumed: p = 2 prints the eigenvalue 6.
    let out = run(&["verify", "--p", "2", "--seed", "13"]);
    assert!(stdout_str(&out).contains("K = 6"));
}

#[test]
fn verify_detects_tampered_eigenfunction() {
    let out = run(&["verify", "--p", "1", "--seed", "13", "--phi-exponent", "1.01"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_str(&out).contains("FAIL"));
}

#[test]
fn config_file_fills_in_defaults() {
    let dir = tmp_dir("config");
    let cfg = dir.join("run.cfg");
    let out_path = dir.join("cfg-sample.txt");
    std::fs::write(
        &cfg,
        format!("roots = 0.4,0\nn = 64\nseed = 17\nout = {}\n", out_path.display()),
    )
    .unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "simulate"]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("# complex-sample v1 n=64 seed=17"));
    // A flag overrides the config value.
    let out2_path = dir.join("cfg-sample2.txt");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "simulate",
        "--n",
        "32",
        "--out",
        out2_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out2_path).unwrap();
    assert!(text.starts_with("# complex-sample v1 n=32 seed=17"));
}
