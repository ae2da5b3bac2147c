//! Declarative run configuration (TOML).
//!
//! ```toml
//! output_dir = "out"
//! suffix_rules = "public_suffix_list.dat"
//! org_map = "orgs.csv"
//! theta = 2
//! top_k = 25
//!
//! [metrics]
//! redundancy = true
//!
//! [[snapshot]]
//! id = "2016"
//! date_label = "2016-05"
//! log = "logs/2016.jsonl"
//! tracker_list = "lists/2016.txt"
//! tracker_list_version = "2016-05"
//!
//! [[cs]]
//! name = "sync-a"
//! path = "cs/sync-a.csv"
//! ```
//!
//! Relative paths resolve against the directory holding the config file.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_theta() -> u32 {
    trackscope::ttgraph::DEFAULT_THETA
}

fn default_top_k() -> usize {
    25
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    pub suffix_rules: PathBuf,
    #[serde(default)]
    pub org_map: Option<PathBuf>,
    /// Minimum publisher co-occurrence for a TT edge.
    #[serde(default = "default_theta")]
    pub theta: u32,
    #[serde(default = "default_top_k")]
    pub top_k: usize,
    /// Recorded in the manifest; the pipeline itself draws no random numbers.
    #[serde(default)]
    pub seed: u64,
    /// Restrict every snapshot to the publishers common to all of them.
    #[serde(default = "yes")]
    pub align: bool,
    #[serde(default)]
    pub metrics: MetricFlags,
    #[serde(default, rename = "snapshot")]
    pub snapshots: Vec<SnapshotSpec>,
    #[serde(default, rename = "cs")]
    pub cs: Vec<CsSpec>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricFlags {
    /// Mean bipartite redundancy in the PT summary.
    #[serde(default = "yes")]
    pub redundancy: bool,
    /// Pearson correlations between node metrics.
    #[serde(default = "yes")]
    pub correlations: bool,
}

impl Default for MetricFlags {
    fn default() -> Self {
        Self {
            redundancy: true,
            correlations: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotSpec {
    pub id: String,
    #[serde(default)]
    pub date_label: Option<String>,
    pub log: PathBuf,
    pub tracker_list: PathBuf,
    #[serde(default)]
    pub tracker_list_version: Option<String>,
}

impl SnapshotSpec {
    pub fn date_label(&self) -> &str {
        self.date_label.as_deref().unwrap_or(&self.id)
    }

    pub fn list_version(&self) -> &str {
        self.tracker_list_version.as_deref().unwrap_or(&self.id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsSpec {
    pub name: String,
    pub path: PathBuf,
    /// Treat a missing weight column as weight 1 per pair.
    #[serde(default)]
    pub default_weight: bool,
}

fn safe_name(s: &str) -> bool {
    !s.is_empty()
        && s != "."
        && s != ".."
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
}

impl RunConfig {
    pub fn from_toml(text: &str, base_dir: &Path) -> CliResult<Self> {
        let mut cfg: RunConfig =
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.base_dir = base_dir.to_path_buf();
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_toml(&text, &base)
    }

    /// Path as written in the config, resolved against the config directory.
    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn output_root(&self) -> PathBuf {
        self.resolve(&self.output_dir)
    }

    /// Every input file with a short role label.
    pub fn input_files(&self) -> Vec<(String, &Path)> {
        let mut v = vec![("suffix_rules".to_string(), self.suffix_rules.as_path())];
        if let Some(o) = &self.org_map {
            v.push(("org_map".into(), o));
        }
        for s in &self.snapshots {
            v.push((format!("snapshot:{}:log", s.id), &s.log));
            v.push((format!("snapshot:{}:tracker_list", s.id), &s.tracker_list));
        }
        for c in &self.cs {
            v.push((format!("cs:{}", c.name), &c.path));
        }
        v
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.theta < 1 {
            return bad("theta must be >= 1".into());
        }
        if self.top_k < 1 {
            return bad("top_k must be >= 1".into());
        }
        if self.snapshots.is_empty() {
            return bad("at least one [[snapshot]] is required".into());
        }
        let mut ids = BTreeSet::new();
        for s in &self.snapshots {
            if !safe_name(&s.id) {
                return bad(format!(
                    "snapshot id {:?} must be alphanumeric, '-', '_' or '.'",
                    s.id
                ));
            }
            if !ids.insert(&s.id) {
                return bad(format!("duplicate snapshot id {:?}", s.id));
            }
        }
        let mut names = BTreeSet::new();
        for c in &self.cs {
            if !safe_name(&c.name) {
                return bad(format!(
                    "cs name {:?} must be alphanumeric, '-', '_' or '.'",
                    c.name
                ));
            }
            if !names.insert(&c.name) {
                return bad(format!("duplicate cs name {:?}", c.name));
            }
        }
        for (role, p) in self.input_files() {
            let full = self.resolve(p);
            if !full.is_file() {
                let e = std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    format!("{role} input not found"),
                );
                return Err(CliError::io(full, e));
            }
        }
        Ok(())
    }

    /// SHA-256 over the analysis settings and input paths as written; the
    /// output location is excluded so relocated runs hash alike.
    pub fn hash(&self) -> String {
        let mut view = self.clone();
        view.output_dir = PathBuf::new();
        let bytes = serde_json::to_vec(&view).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
suffix_rules = "psl.dat"
[[snapshot]]
id = "a"
log = "a.jsonl"
tracker_list = "a.txt"
"#;

    #[test]
    fn defaults() {
        let c = RunConfig::from_toml(MINIMAL, Path::new("/base")).unwrap();
        assert_eq!((c.theta, c.top_k, c.align), (2, 25, true));
        assert!(c.metrics.redundancy);
        assert_eq!(
            c.resolve(&c.snapshots[0].log),
            PathBuf::from("/base/a.jsonl")
        );
        assert_eq!(c.output_root(), PathBuf::from("/base/out"));
        assert_eq!(c.snapshots[0].date_label(), "a");
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(matches!(
            RunConfig::from_toml("suffix_rules = 'x'\nbogus = 1", Path::new(".")),
            Err(CliError::Config(_))
        ));
        let mut c = RunConfig::from_toml(MINIMAL, Path::new("/nonexistent")).unwrap();
        assert!(c.validate().is_err(), "missing files");
        c.theta = 0;
        assert!(c.validate().unwrap_err().to_string().contains("theta"));
    }

    #[test]
    fn hash_ignores_output_dir() {
        let a = RunConfig::from_toml(MINIMAL, Path::new("/x")).unwrap();
        let mut b = a.clone();
        b.output_dir = PathBuf::from("elsewhere");
        assert_eq!(a.hash(), b.hash());
        b.theta = 3;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
