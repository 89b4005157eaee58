//! Output persistence and run summaries.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Writes `bytes` to a sibling temporary file and renames it over `path`,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// CSV with a leading `# schemaVersion` comment line and a header row.
pub fn csv_bytes<T: Serialize>(rows: &[T], header: &[&str]) -> Result<Vec<u8>> {
    let mut out = format!("# schemaVersion: {SCHEMA_VERSION}\n").into_bytes();
    {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut out);
        w.write_record(header)?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    Ok(out)
}

/// Pass/fail counts over row-level checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    /// 1-based index of the first failing row.
    pub first_failure: Option<usize>,
}

impl Summary {
    pub fn from_checks(checks: &[bool]) -> Self {
        Self {
            total: checks.len(),
            passed: checks.iter().filter(|&&c| c).count(),
            first_failure: checks.iter().position(|&c| !c).map(|i| i + 1),
        }
    }

    pub fn failed(&self) -> usize {
        self.total - self.passed
    }

    pub fn ok(&self) -> bool {
        self.failed() == 0
    }
}

/// One-line verdict: `PASS n/n`, `FAIL k/n (see row r)`, or
/// `PASS 0/0 (no checks executed)`.
pub fn emit_summary(s: &Summary) -> String {
    if s.total == 0 {
        return "PASS 0/0 (no checks executed)".to_string();
    }
    match s.first_failure {
        None => format!("PASS {}/{}", s.passed, s.total),
        Some(r) => format!("FAIL {}/{} (see row {r})", s.passed, s.total),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentConfig {
    pub subcommand: String,
    pub parameters: serde_json::Map<String, serde_json::Value>,
    pub seed: u64,
    pub output_path: PathBuf,
}

/// Sidecar record of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: ExperimentConfig,
    pub started_at: String,
    pub finished_at: String,
    pub rows: Vec<serde_json::Value>,
    pub summary: Summary,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// `<out>.<suffix>` next to the main output.
pub fn sidecar_path(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}
