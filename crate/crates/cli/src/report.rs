use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "onticlab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA_VERSION: &str = "v1";

/// Input files read during a run, keyed by path, with their SHA-256.
#[derive(Debug, Default)]
pub struct Fixtures {
    hashes: BTreeMap<String, String>,
}

impl Fixtures {
    pub fn read(&mut self, path: &Path) -> Result<Vec<u8>, String> {
        let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.hashes.insert(path.display().to_string(), hex);
        Ok(bytes)
    }

    pub fn read_json<T: serde::de::DeserializeOwned>(&mut self, path: &Path) -> Result<T, String> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes).map_err(|e| format!("{}: {e}", path.display()))
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    schema: String,
    config: &'a Value,
    seed: u64,
    fixtures: &'a BTreeMap<String, String>,
    result: &'a Value,
}

/// Pretty JSON report; keys are sorted and no run-dependent data is added,
/// so equal inputs give equal bytes.
pub fn render(kind: &str, config: &Value, seed: u64, fixtures: &Fixtures, result: &Value) -> String {
    let envelope = Envelope {
        tool: TOOL,
        version: VERSION,
        schema: format!("{SCHEMA_VERSION}/{kind}"),
        config,
        seed,
        fixtures: &fixtures.hashes,
        result,
    };
    let mut out = serde_json::to_string_pretty(&envelope).expect("report is valid JSON");
    out.push('\n');
    out
}

/// CSV table with a header row.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
