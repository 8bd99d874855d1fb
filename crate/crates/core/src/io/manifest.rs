use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use crate::ensemble::{SweepAxis, SweepFit};
use crate::error::{Error, Result};
use crate::gpe::SimConfig;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    /// Path relative to the output directory.
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

pub fn digest_file(dir: &Path, name: &str) -> Result<FileDigest> {
    let mut file = std::fs::File::open(dir.join(name))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 1 << 16];
    let mut bytes = 0u64;
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
        bytes += n as u64;
    }
    Ok(FileDigest {
        name: name.to_string(),
        sha256: hex::encode(hasher.finalize()),
        bytes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtifactKind {
    Run,
    Sweep,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepInfo {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub fit: SweepFit,
    /// Log-log slope of the fitted quantity and its standard error.
    pub scaling: Option<(f64, f64)>,
}

/// Everything needed to reproduce and verify one output directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub kind: ArtifactKind,
    pub code_version: String,
    pub config: RunConfig,
    pub sim: SimConfig,
    pub seed: u64,
    pub started: String,
    pub finished: String,
    pub workers: Option<usize>,
    pub completed: usize,
    pub aborted: usize,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(default)]
    pub sweep: Option<SweepInfo>,
    pub files: Vec<FileDigest>,
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(dir.join(MANIFEST_FILE), text + "\n")?;
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(dir.join(MANIFEST_FILE))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Recompute every listed digest.
    pub fn verify(&self, dir: &Path) -> Result<()> {
        for f in &self.files {
            let now = digest_file(dir, &f.name)?;
            if now != *f {
                return Err(Error::Mismatch(format!("{} does not match its manifest digest", f.name)));
            }
        }
        Ok(())
    }
}
