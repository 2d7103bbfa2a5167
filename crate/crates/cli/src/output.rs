//! Tabular results, their CSV and JSON renderings, and the run manifest.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => match i64::try_from(*v) {
                Ok(small) => json!(small),
                Err(_) => json!(v.to_string()),
            },
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(v) => json!(v.to_string()),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

/// Shortest round-trip text; scientific notation outside `[1e-4, 1e15)`.
fn format_float(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<u128> for Cell {
    fn from(v: u128) -> Self {
        i128::try_from(v).map_or_else(|_| Cell::Text(v.to_string()), Cell::Int)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// A header row plus data rows. Column names carry their units as suffixes.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Other(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Other(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Other(e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "columns": self.columns,
            "rows": self
                .rows
                .iter()
                .map(|r| r.iter().map(Cell::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: Vec<String>,
    pub config: std::collections::BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub shots: Option<u64>,
    pub version: &'static str,
    pub timestamp_unix: u64,
    pub outputs: Vec<OutputDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Sibling path sharing the stem of `out`, e.g. `run.csv` -> `run.manifest.json`.
pub fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}{suffix}"))
}

/// Writes the given named artifacts next to each other and a manifest that
/// lists each with its digest.
pub fn write_artifacts(
    command: &str,
    config: &Config,
    artifacts: &[(PathBuf, Vec<u8>)],
    manifest_path: &Path,
) -> Result<(), CliError> {
    let mut outputs = Vec::with_capacity(artifacts.len());
    for (path, bytes) in artifacts {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, bytes)?;
        outputs.push(OutputDigest {
            file: path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
            sha256: sha256_hex(bytes),
        });
    }
    let manifest = RunManifest {
        command: command.to_string(),
        arguments: std::env::args().skip(1).collect(),
        config: config.entries().clone(),
        seed: config.get_opt("seed")?,
        shots: config.get_opt("shots")?,
        version: env!("CARGO_PKG_VERSION"),
        timestamp_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        outputs,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(manifest_path, text)?;
    Ok(())
}

/// Emits a table to stdout, or as CSV + JSON + manifest under `out`.
pub fn emit_table(command: &str, config: &Config, table: &Table, out: Option<&Path>) -> Result<(), CliError> {
    let csv_text = table.to_csv()?;
    match out {
        None => {
            print!("{csv_text}");
            Ok(())
        }
        Some(path) => {
            let mut json_text = serde_json::to_string_pretty(&table.to_json())?;
            json_text.push('\n');
            let artifacts = [
                (path.to_path_buf(), csv_text.into_bytes()),
                (sibling(path, ".json"), json_text.into_bytes()),
            ];
            write_artifacts(command, config, &artifacts, &sibling(path, ".manifest.json"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_agree_on_shape() {
        let mut t = Table::new(&["x", "T_mK", "label"]);
        t.push(vec![0.5.into(), f64::INFINITY.into(), "a".into()]);
        t.push(vec![1.25e-8.into(), (-0.0).into(), "b".into()]);
        assert_eq!(t.to_csv().unwrap(), "x,T_mK,label\n0.5,inf,a\n1.25e-8,-0,b\n");
        let j = t.to_json();
        assert_eq!(j["rows"][0][1], json!("inf"));
        assert_eq!(j["columns"][2], json!("label"));
    }

    #[test]
    fn sibling_paths() {
        assert_eq!(
            sibling(Path::new("out/run.csv"), ".json"),
            PathBuf::from("out/run.json")
        );
    }
}
