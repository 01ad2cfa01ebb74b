//! Run manifests: every scan directory gets a manifest.json whose config
//! hash also appears as a comment in each emitted CSV/SVG, tying outputs
//! to the exact configuration that produced them.

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub tool_version: &'static str,
    pub master_seed: u64,
    pub started_at: String,
    pub finished_at: String,
    pub outputs: Vec<String>,
}

/// SHA-256 of the canonical config string, hex-encoded.
pub fn config_hash(canonical: &str) -> String {
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn now_rfc3339() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

impl RunManifest {
    pub fn write(&self, path: &std::path::Path) -> Result<(), String> {
        let json = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, json + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_and_hex() {
        let h = config_hash("n=30 trials=500");
        assert_eq!(h.len(), 64);
        assert_eq!(h, config_hash("n=30 trials=500"));
        assert_ne!(h, config_hash("n=31 trials=500"));
    }
}
