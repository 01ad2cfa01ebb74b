//! Optional flat key = value config file. Flags always win; the file only
//! fills in values the command line left unset. No sections, no nesting,
//! so a run is auditable from one screen.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Default)]
pub struct FlatConfig {
    map: HashMap<String, String>,
}

impl FlatConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut map = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!(
                    "config {} line {}: expected key = value",
                    path.display(),
                    lineno + 1
                ));
            };
            map.insert(key.trim().replace('_', "-"), value.trim().to_string());
        }
        Ok(Self { map })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    /// Parses `key` if present, otherwise returns `default`.
    pub fn parsed_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, String> {
        match self.get(key) {
            Some(raw) => raw
                .parse()
                .map_err(|_| format!("config key {key}: cannot parse {raw:?}")),
            None => Ok(default),
        }
    }
}

/// Flag wins, then config, then the default.
pub fn resolve<T: FromStr + Clone>(
    flag: Option<T>,
    config: &FlatConfig,
    key: &str,
    default: T,
) -> Result<T, String> {
    match flag {
        Some(v) => Ok(v),
        None => config.parsed_or(key, default),
    }
}

/// Flag wins, then config; errors when neither is present.
pub fn require<T: FromStr>(flag: Option<T>, config: &FlatConfig, key: &str) -> Result<T, String> {
    match flag {
        Some(v) => Ok(v),
        None => match config.get(key) {
            Some(raw) => raw
                .parse()
                .map_err(|_| format!("config key {key}: cannot parse {raw:?}")),
            None => Err(format!("missing required option --{key}")),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_pairs_and_respects_precedence() {
        let dir = std::env::temp_dir().join("specshrink-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg");
        std::fs::write(&path, "# comment\nn = 64\nseed = 9\nxi-grid = -0.5:0.5:0.5\n").unwrap();
        let cfg = FlatConfig::load(Some(&path)).unwrap();
        assert_eq!(resolve(None, &cfg, "n", 0usize).unwrap(), 64);
        assert_eq!(resolve(Some(128usize), &cfg, "n", 0).unwrap(), 128);
        assert_eq!(cfg.get("xi-grid"), Some("-0.5:0.5:0.5"));
        assert!(require::<usize>(None, &cfg, "trials").is_err());
    }
}
