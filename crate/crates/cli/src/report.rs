//! Canonical JSON reports. `serde_json` maps are ordered by key, so equal
//! inputs give byte-identical output.

use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub struct Report {
    pub command: &'static str,
    pub fixtures: Vec<(String, String)>,
    pub inputs: Value,
    pub results: Value,
    pub violations: Vec<Value>,
    pub pass: bool,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `(file name, sha256)` of a fixture file.
pub fn fixture_entry(path: &Path, bytes: &[u8]) -> (String, String) {
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    (name, digest(bytes))
}

impl Report {
    pub fn new(command: &'static str, inputs: Value) -> Self {
        Report {
            command,
            fixtures: Vec::new(),
            inputs,
            results: Value::Null,
            violations: Vec::new(),
            pass: true,
        }
    }

    pub fn to_json(&self, wall_ms: Option<u128>) -> Value {
        let mut out = json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "fixtures": self.fixtures.iter().map(|(n, d)| json!({"name": n, "sha256": d})).collect::<Vec<_>>(),
            "inputs": self.inputs,
            "results": self.results,
            "violations": self.violations,
            "pass": self.pass,
        });
        if let Some(ms) = wall_ms {
            out["wall_time_ms"] = json!(ms);
        }
        out
    }

    pub fn render(&self, wall_ms: Option<u128>) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json(wall_ms)).expect("values serialize");
        s.push('\n');
        s
    }
}
