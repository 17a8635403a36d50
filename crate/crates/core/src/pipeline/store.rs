//! Content-addressed store of verdict reports, keyed by group name and input hash.

use std::fs;
use std::path::{Path, PathBuf};

use super::report::{VerdictReport, SCHEMA};
use super::PipelineError;

#[derive(Clone, Debug)]
pub struct Store {
    dir: PathBuf,
}

impl Store {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Store { dir: dir.into() }
    }

    /// Store at `$ZCV_STORE`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os("ZCV_STORE").filter(|v| !v.is_empty()).map(Store::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// `<sanitized name>-<first 16 hex digits of the hash>`; the config fingerprint is folded into the hash.
    pub fn key(name: &str, hash: &str) -> String {
        let clean: String =
            name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' }).collect();
        format!("{clean}-{}", &hash[..hash.len().min(16)])
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored report, if present and readable with the current schema.
    pub fn load(&self, key: &str) -> Option<VerdictReport> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        match serde_json::from_str::<VerdictReport>(&text) {
            Ok(r) if r.schema == SCHEMA => Some(r),
            Ok(_) => None,
            Err(e) => {
                log::warn!("ignoring unreadable store entry {key}: {e}");
                None
            }
        }
    }

    /// Writes through a temporary file so readers never see a partial report.
    pub fn save(&self, key: &str, report: &VerdictReport) -> Result<(), PipelineError> {
        let err = |e: std::io::Error| PipelineError::Store(format!("{}: {e}", self.dir.display()));
        fs::create_dir_all(&self.dir).map_err(err)?;
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, report.to_json()).map_err(err)?;
        fs::rename(&tmp, self.path(key)).map_err(err)
    }
}
