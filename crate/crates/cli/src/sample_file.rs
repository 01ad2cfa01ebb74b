//! Sample file format: a header line `# complex-sample v1 n=<N> seed=<s>`
//! followed by one `re im` pair per line.

use std::path::Path;

use num_complex::Complex64;
use specshrink_core::ComplexSample;

pub fn write_sample(path: &Path, sample: &ComplexSample, seed: u64) -> Result<(), String> {
    let mut out = String::with_capacity(sample.len() * 32 + 64);
    out.push_str(&format!("# complex-sample v1 n={} seed={}\n", sample.len(), seed));
    for z in sample.values() {
        out.push_str(&format!("{} {}\n", z.re, z.im));
    }
    std::fs::write(path, out).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

pub fn read_sample(path: &Path) -> Result<ComplexSample, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut declared_n: Option<usize> = None;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if lineno == 0 {
                if !line.starts_with("# complex-sample v1") {
                    return Err(format!("{}: unrecognized header {line:?}", path.display()));
                }
                declared_n = line.split_whitespace().find_map(|tok| {
                    tok.strip_prefix("n=").and_then(|v| v.parse().ok())
                });
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let (re, im) = match (parts.next(), parts.next(), parts.next()) {
            (Some(re), Some(im), None) => (re, im),
            _ => {
                return Err(format!(
                    "{} line {}: expected `re im`",
                    path.display(),
                    lineno + 1
                ))
            }
        };
        let re: f64 = re
            .parse()
            .map_err(|_| format!("{} line {}: bad real part", path.display(), lineno + 1))?;
        let im: f64 = im
            .parse()
            .map_err(|_| format!("{} line {}: bad imaginary part", path.display(), lineno + 1))?;
        values.push(Complex64::new(re, im));
    }
    if let Some(n) = declared_n {
        if n != values.len() {
            return Err(format!(
                "{}: header declares n={n} but file holds {} values",
                path.display(),
                values.len()
            ));
        }
    }
    ComplexSample::new(values).map_err(|e| format!("{}: {e}", path.display()))
}
