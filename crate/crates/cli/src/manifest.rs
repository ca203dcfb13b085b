use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

/// Record of one run, sufficient to repeat it with `twsec replay`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Full command line, program name first.
    pub argv: Vec<String>,
    pub parameters: serde_json::Value,
    pub seeds: Vec<u64>,
    pub timestamp_unix: u64,
    pub out_dir: PathBuf,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(
        command: &str,
        argv: Vec<String>,
        parameters: serde_json::Value,
        seeds: Vec<u64>,
        out_dir: PathBuf,
        outputs: Vec<PathBuf>,
    ) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            argv,
            parameters,
            seeds,
            timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            out_dir,
            outputs,
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}
