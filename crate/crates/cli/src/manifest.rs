//! Run manifests: the full resolved configuration plus diagnostics, written
//! next to every output so any file can be traced to exactly one run and
//! regenerated from it.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::csvio::atomic_write;
use crate::{config_err, CliResult, CSV_SCHEMA, VERSION};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub csv_schema: String,
    pub command: String,
    pub config: Value,
    pub convention: String,
    pub seed: u64,
    pub dim: usize,
    /// SHA-256 over the canonical config JSON and any input file bytes.
    pub input_hash: String,
    pub timings: Timings,
    pub diagnostics: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timings {
    pub total_seconds: f64,
}

impl RunManifest {
    pub fn new(
        command: &str,
        config: Value,
        convention: String,
        seed: u64,
        dim: usize,
        input_files: &[&Path],
    ) -> CliResult<Self> {
        let mut hasher = Sha256::new();
        hasher.update(config.to_string().as_bytes());
        for path in input_files {
            let bytes = std::fs::read(path)
                .map_err(|e| config_err(format!("cannot hash {}: {e}", path.display())))?;
            hasher.update(&bytes);
        }
        let digest = hasher.finalize();
        let input_hash: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        Ok(Self {
            version: VERSION.to_string(),
            csv_schema: CSV_SCHEMA.to_string(),
            command: command.to_string(),
            config,
            convention,
            seed,
            dim,
            input_hash,
            timings: Timings { total_seconds: 0.0 },
            diagnostics: Value::Null,
        })
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| config_err(format!("manifest serialization: {e}")))?;
        text.push('\n');
        atomic_write(path, text.as_bytes())
            .map_err(|e| config_err(format!("cannot write {}: {e}", path.display())))
    }
}
