use super::{RealizationRecord, RunConfig, RunnerError};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

/// One CSV file: unit-annotated header plus pre-formatted rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, RunnerError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(io_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(io_err)?;
        }
        w.into_inner().map_err(|e| RunnerError::Io(e.to_string()))
    }
}

/// Shortest round-trip formatting, identical on every platform.
pub fn num(x: f64) -> String {
    format!("{x}")
}

fn io_err(e: impl std::fmt::Display) -> RunnerError {
    RunnerError::Io(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaDevStats {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl SigmaDevStats {
    pub fn from_records(records: &[RealizationRecord]) -> Option<Self> {
        let v: Vec<f64> = records.iter().filter_map(|r| r.sigma_dev).collect();
        if v.is_empty() {
            return None;
        }
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        Some(Self {
            count: v.len(),
            mean,
            std: var.sqrt(),
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub experiment: String,
    pub config_hash: String,
    pub code_version: String,
    pub started_unix_s: f64,
    pub finished_unix_s: f64,
    pub wall_time_s: f64,
    pub threads: usize,
    pub ensemble_size: usize,
    pub excluded: usize,
    pub sigma_dev: Option<SigmaDevStats>,
    pub files: Vec<FileEntry>,
    pub realizations: Vec<RealizationRecord>,
    pub config: RunConfig,
}

pub const MANIFEST_NAME: &str = "manifest.json";

/// Create `dir`, refusing a non-empty existing directory unless `force`.
pub fn prepare_output_dir(dir: &Path, force: bool) -> Result<(), RunnerError> {
    if dir.exists() {
        let occupied = fs::read_dir(dir).map_err(io_err)?.next().is_some();
        if occupied && !force {
            return Err(RunnerError::OutputExists(dir.to_path_buf()));
        }
    }
    fs::create_dir_all(dir).map_err(io_err)
}

/// Write through a temporary file and rename into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), RunnerError> {
    let mut tmp = PathBuf::from(path);
    tmp.set_extension("partial");
    fs::write(&tmp, bytes).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

pub fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<FileEntry, RunnerError> {
    write_atomic(&dir.join(name), bytes)?;
    Ok(FileEntry { name: name.to_string(), sha256: hex::encode(Sha256::digest(bytes)), bytes: bytes.len() })
}

pub fn write_table(dir: &Path, table: &Table) -> Result<FileEntry, RunnerError> {
    write_file(dir, &table.name, &table.to_bytes()?)
}

pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<(), RunnerError> {
    let json = serde_json::to_vec_pretty(manifest).map_err(io_err)?;
    write_atomic(&dir.join(MANIFEST_NAME), &json)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_bytes_and_refusal() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::new("a.csv", &["time_fs", "value"]);
        t.push(vec![num(0.1), num(1.0 / 3.0)]);
        let e = write_table(dir.path(), &t).unwrap();
        let text = fs::read_to_string(dir.path().join("a.csv")).unwrap();
        assert_eq!(text, "time_fs,value\n0.1,0.3333333333333333\n");
        assert_eq!(e.bytes, text.len());
        assert!(prepare_output_dir(dir.path(), false).is_err());
        assert!(prepare_output_dir(dir.path(), true).is_ok());
        assert!(prepare_output_dir(&dir.path().join("fresh"), false).is_ok());
    }

    #[test]
    fn sigma_dev_stats() {
        let rec = |i, s| RealizationRecord { index: i, status: "ok", reason: None, sigma_dev: s };
        let st = SigmaDevStats::from_records(&[rec(0, Some(1.0)), rec(1, None), rec(2, Some(3.0))]).unwrap();
        assert_eq!((st.count, st.mean, st.std, st.min, st.max), (2, 2.0, 1.0, 1.0, 3.0));
        assert!(SigmaDevStats::from_records(&[rec(0, None)]).is_none());
    }
}
