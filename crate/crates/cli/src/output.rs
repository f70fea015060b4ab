// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! CSV tables and the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use sqlaser::dynamics::{Diagnostics, IntegratorConfig, IntegratorStats};
use sqlaser::observables::WignerGrid;

use crate::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";

/// Row-major table; a `None` cell is written empty.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        assert_eq!(row.len(), self.headers.len(), "row width");
        self.rows.push(row);
    }

    /// Full precision: 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| c.map(|v| format!("{v:.16e}")).unwrap_or_default())
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn parse_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        let headers: Vec<String> = lines
            .next()
            .ok_or("empty CSV")?
            .split(',')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for line in lines {
            let row = line
                .split(',')
                .map(|c| {
                    if c.is_empty() {
                        Ok(None)
                    } else {
                        c.parse::<f64>().map(Some).map_err(|e| format!("{c}: {e}"))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != headers.len() {
                return Err(format!("row width {} vs {} headers", row.len(), headers.len()));
            }
            rows.push(row);
        }
        Ok(Self { headers, rows })
    }
}

pub fn wigner_table(grid: &WignerGrid) -> Table {
    let mut t = Table::new(&["x", "p", "w"]);
    for (x, p, w) in grid.rows() {
        t.push(vec![Some(x), Some(p), Some(w)]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileRecord {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact: String,
    pub version: String,
    pub scenario: String,
    pub config_echo: String,
    pub derived: BTreeMap<String, Value>,
    pub metrics: BTreeMap<String, Value>,
    pub truncation: BTreeMap<String, Value>,
    pub integrator: BTreeMap<String, Value>,
    pub diagnostics: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
    pub wall_clock_seconds: f64,
    pub files: Vec<FileRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn stats_json(stats: &IntegratorStats) -> Value {
    serde_json::json!({
        "accepted": stats.accepted,
        "rejected": stats.rejected,
        "rhs_evals": stats.rhs_evals,
        "min_step": finite(stats.min_step),
        "max_step": finite(stats.max_step),
    })
}

pub fn settings_json(cfg: &IntegratorConfig) -> Value {
    serde_json::json!({
        "rel_tol": cfg.rel_tol,
        "abs_tol": cfg.abs_tol,
        "max_step": finite(cfg.max_step),
        "min_step": cfg.min_step,
        "fixed_step": cfg.fixed_step,
    })
}

pub fn diagnostics_json(d: &Diagnostics) -> BTreeMap<String, Value> {
    [
        ("max_norm_drift", d.max_norm_drift),
        ("max_trace_drift", d.max_trace_drift),
        ("max_hermiticity_drift", d.max_hermiticity_drift),
        ("min_eigenvalue", d.min_eigenvalue),
        ("max_tail", d.max_tail),
        ("max_unitarity_correction", d.max_unitarity_correction),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), finite(v)))
    .collect()
}

/// JSON has no infinities; they become `null`.
pub fn finite(v: f64) -> Value {
    if v.is_finite() {
        Value::from(v)
    } else {
        Value::Null
    }
}

/// Writes data files into `dir`, records their checksums and writes the
/// manifest last.
pub struct OutputDir {
    dir: PathBuf,
    files: Vec<FileRecord>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        fs::write(self.dir.join(name), contents)?;
        self.files.push(FileRecord {
            name: name.to_string(),
            bytes: contents.len() as u64,
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(())
    }

    pub fn write_table(&mut self, name: &str, table: &Table) -> Result<(), CliError> {
        self.write(name, &table.to_csv())
    }

    pub fn finish(self, mut manifest: RunManifest) -> Result<RunManifest, CliError> {
        manifest.files = self.files;
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
        fs::write(self.dir.join(MANIFEST_NAME), text + "\n")?;
        Ok(manifest)
    }
}

pub fn read_manifest(dir: &Path) -> Result<RunManifest, CliError> {
    let text = fs::read_to_string(dir.join(MANIFEST_NAME))?;
    serde_json::from_str(&text).map_err(|e| CliError::Verify(format!("bad manifest: {e}")))
}

/// Re-hashes every listed file; returns the names that do not match.
pub fn verify_dir(dir: &Path) -> Result<Vec<String>, CliError> {
    let manifest = read_manifest(dir)?;
    let mut bad = Vec::new();
    for f in &manifest.files {
        match fs::read(dir.join(&f.name)) {
            Ok(bytes) if sha256_hex(&bytes) == f.sha256 && bytes.len() as u64 == f.bytes => {}
            _ => bad.push(f.name.clone()),
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_lossless() {
        let mut t = Table::new(&["t_in_g_units", "a", "b"]);
        let vals = [0.1, 1.0 / 3.0, -2.5e-300, 1.7e300, 1e-17, 0.0];
        for v in vals {
            t.push(vec![Some(v), Some(v * 7.0), None]);
        }
        let back = Table::parse_csv(&t.to_csv()).unwrap();
        assert_eq!(back.headers, t.headers);
        for (r, v) in back.rows.iter().zip(vals) {
            assert_eq!(r[0], Some(v));
            assert_eq!(r[1], Some(v * 7.0));
            assert_eq!(r[2], None);
        }
    }

    #[test]
    fn sha256_of_known_input() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn non_finite_becomes_null() {
        assert_eq!(finite(f64::INFINITY), Value::Null);
        assert_eq!(finite(0.5), Value::from(0.5));
    }
}
