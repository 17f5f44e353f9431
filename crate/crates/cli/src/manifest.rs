use std::collections::BTreeMap;
use std::fs;

use serde::Serialize;
use serde_json::Value;

/// Everything needed to reproduce a run. Written next to the outputs as
/// `PREFIX.manifest.json`.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: &'static str,
    pub inputs: Vec<String>,
    pub config: BTreeMap<&'static str, Value>,
    pub outputs: Vec<String>,
    pub version: &'static str,
}

impl RunManifest {
    pub fn new(subcommand: &'static str) -> Self {
        RunManifest {
            subcommand,
            inputs: Vec::new(),
            config: BTreeMap::new(),
            outputs: Vec::new(),
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn input(mut self, path: impl ToString) -> Self {
        self.inputs.push(path.to_string());
        self
    }

    pub fn set(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.config.insert(key, value.into());
        self
    }

    /// Writes `contents` to `path` and records it as an output.
    pub fn write(&mut self, path: String, contents: &str) -> std::io::Result<()> {
        fs::write(&path, contents)?;
        self.outputs.push(path);
        Ok(())
    }

    pub fn save(mut self, prefix: &str) -> std::io::Result<()> {
        let path = format!("{prefix}.manifest.json");
        self.outputs.push(path.clone());
        let text = serde_json::to_string_pretty(&self).expect("manifest serializes") + "\n";
        fs::write(path, text)
    }
}
