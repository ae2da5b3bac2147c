//! Output directory bookkeeping and the run manifest.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const MANIFEST: &str = "manifest.json";

/// Rounds to 2 decimals, the precision used for percentages.
pub fn pct(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Rounds to 6 decimals, the precision used for fractions and metrics.
pub fn frac(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

pub fn fmt_pct(x: f64) -> String {
    format!("{x:.2}")
}

pub fn fmt_frac(x: f64) -> String {
    format!("{x:.6}")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputRecord {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// `complete`, or `incomplete` when the run stopped on an error.
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    pub inputs: Vec<InputRecord>,
    pub tracker_list_versions: Vec<(String, String)>,
    pub files: Vec<FileRecord>,
}

/// Writes files below a root directory and remembers each one for the
/// manifest.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    files: Vec<FileRecord>,
    pub inputs: Vec<InputRecord>,
    pub tracker_list_versions: Vec<(String, String)>,
    pub config_hash: Option<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        std::fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
            inputs: Vec::new(),
            tracker_list_versions: Vec::new(),
            config_hash: None,
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn files(&self) -> &[FileRecord] {
        &self.files
    }

    /// Records an input file's hash; `shown` is the path as the user gave it.
    pub fn add_input(&mut self, role: &str, shown: &Path, actual: &Path) -> CliResult<()> {
        let bytes = std::fs::read(actual).map_err(|e| CliError::io(actual, e))?;
        self.inputs.push(InputRecord {
            role: role.to_string(),
            path: shown.to_string_lossy().replace('\\', "/"),
            sha256: sha256_hex(&bytes),
        });
        Ok(())
    }

    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> CliResult<()> {
        let path = self.root.join(rel);
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.files.retain(|f| f.path != rel);
        self.files.push(FileRecord {
            path: rel.to_string(),
            bytes: bytes.len(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, rel: &str, value: &T) -> CliResult<()> {
        let mut bytes = serde_json::to_vec_pretty(value).expect("output types serialize");
        bytes.push(b'\n');
        self.write(rel, &bytes)
    }

    /// Writes a CSV built row by row.
    pub fn write_csv<I, R>(&mut self, rel: &str, header: &[&str], rows: I) -> CliResult<()>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
    {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::io(rel, std::io::Error::other(e));
        wtr.write_record(header).map_err(err)?;
        for row in rows {
            wtr.write_record(row).map_err(err)?;
        }
        let bytes = wtr
            .into_inner()
            .map_err(|e| CliError::io(rel, std::io::Error::other(e.to_string())))?;
        self.write(rel, &bytes)
    }

    /// Writes `manifest.json`; files are listed in path order.
    pub fn finish(&mut self, command: &str, error: Option<&CliError>) -> CliResult<()> {
        let mut files = self.files.clone();
        files.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = Manifest {
            tool: "trackscope",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            status: if error.is_some() {
                "incomplete"
            } else {
                "complete"
            },
            error: error.map(ToString::to_string),
            config_hash: self.config_hash.clone(),
            inputs: self.inputs.clone(),
            tracker_list_versions: self.tracker_list_versions.clone(),
            files,
        };
        let mut bytes = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
        bytes.push(b'\n');
        let path = self.root.join(MANIFEST);
        std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))
    }
}
