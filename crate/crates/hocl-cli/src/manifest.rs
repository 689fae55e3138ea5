//! Run manifests: the fully resolved config plus summary statistics.
//!
//! The `config` field is sufficient to reproduce the run bit-exactly
//! (`--config manifest.json`); `duration_seconds` is the one field that
//! legitimately differs between reproductions.

use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact_version: String,
    pub command: String,
    pub scenario: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub outputs: Vec<String>,
    pub duration_seconds: f64,
    pub summary: serde_json::Value,
}

impl RunManifest {
    pub fn new(
        command: &str,
        scenario: &str,
        seed: u64,
        config: serde_json::Value,
        outputs: Vec<String>,
        duration_seconds: f64,
        summary: serde_json::Value,
    ) -> Self {
        Self {
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            scenario: scenario.to_string(),
            seed,
            config,
            outputs,
            duration_seconds,
            summary,
        }
    }
}
