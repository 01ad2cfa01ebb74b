pub mod fit;
pub mod risk_scan;
pub mod simulate;
pub mod verify;

use num_complex::Complex64;

/// Parses roots given as `re,im` pairs separated by `:`.
pub fn parse_roots(raw: &str) -> Result<Vec<Complex64>, String> {
    raw.split(':')
        .map(|pair| {
            let (re, im) = pair
                .split_once(',')
                .ok_or_else(|| format!("root {pair:?} is not a re,im pair"))?;
            let re: f64 = re.trim().parse().map_err(|_| format!("bad real part in {pair:?}"))?;
            let im: f64 = im
                .trim()
                .parse()
                .map_err(|_| format!("bad imaginary part in {pair:?}"))?;
            Ok(Complex64::new(re, im))
        })
        .collect()
}

/// Parses a `start:stop:step` grid specification, inclusive of the stop
/// value up to rounding.
pub fn parse_grid(raw: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid {raw:?} is not start:stop:step"));
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| "bad grid start".to_string())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| "bad grid stop".to_string())?;
    let step: f64 = parts[2].trim().parse().map_err(|_| "bad grid step".to_string())?;
    if !(step > 0.0) || stop < start {
        return Err(format!("grid {raw:?} must satisfy start <= stop, step > 0"));
    }
    let count = ((stop - start) / step).round() as usize;
    let grid: Vec<f64> = (0..=count)
        .map(|k| {
            let v = start + k as f64 * step;
            // Snap near-zero values produced by float stepping.
            if v.abs() < 1e-12 {
                0.0
            } else {
                v
            }
        })
        .filter(|v| *v <= stop + 1e-9)
        .collect();
    Ok(grid)
}

/// Parses a comma-separated list of floats.
pub fn parse_float_list(raw: &str) -> Result<Vec<f64>, String> {
    raw.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| format!("cannot parse {tok:?} as a number"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_roots_and_grids() {
        let roots = parse_roots("0.5,0:0.1,-0.2").unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[1], Complex64::new(0.1, -0.2));
        assert!(parse_roots("0.5").is_err());

        let grid = parse_grid("-0.2:0.2:0.1").unwrap();
        assert_eq!(grid.len(), 5);
        assert_eq!(grid[2], 0.0);
        assert!(parse_grid("0:1").is_err());

        assert_eq!(parse_float_list("-1,0,1").unwrap(), vec![-1.0, 0.0, 1.0]);
    }
}
