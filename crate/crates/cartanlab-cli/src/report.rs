//! Run reports: versioned JSON envelopes, byte-identical for identical
//! inputs and seed.

use std::path::Path;

use anyhow::Context;
use serde::Serialize;

pub const SCHEMA: &str = "cartanlab/1";

#[derive(Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub seed: u64,
    pub inputs: serde_json::Value,
    pub results: serde_json::Value,
}

impl RunReport {
    pub fn new(
        command: impl Into<String>,
        seed: u64,
        inputs: serde_json::Value,
        results: serde_json::Value,
    ) -> Self {
        Self {
            schema: SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            seed,
            inputs,
            results,
        }
    }

    /// Print to stdout and optionally write to a file (atomically:
    /// temporary file, then rename).
    pub fn emit(&self, json_path: Option<&Path>) -> anyhow::Result<()> {
        let body = serde_json::to_string_pretty(self)?;
        println!("{body}");
        if let Some(path) = json_path {
            write_atomic(path, body.as_bytes())
                .with_context(|| format!("writing report to {}", path.display()))?;
        }
        Ok(())
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
