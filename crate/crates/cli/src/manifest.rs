//! Run manifests: everything needed to reproduce a run, plus content hashes
//! of the artifacts it produced. Timestamps live here and only here; the
//! machine-readable CSV outputs stay deterministic.

use serde::Serialize;
use std::path::Path;

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub command: String,
    pub created_unix: u64,
    pub effective_config: RunConfig,
    pub artifacts: Vec<Artifact>,
}

#[derive(Debug, Serialize)]
pub struct Artifact {
    pub path: String,
    pub fnv64: String,
}

impl Manifest {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Manifest {
            tool: format!("rootcheck {}", env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            created_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            effective_config: config.clone(),
            artifacts: Vec::new(),
        }
    }

    pub fn add_artifact(&mut self, path: &Path) -> Result<(), CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::io(format!("cannot hash {}: {e}", path.display())))?;
        self.artifacts.push(Artifact {
            path: path.display().to_string(),
            fnv64: format!("{:#018x}", fnv64(&bytes)),
        });
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = toml::to_string_pretty(self)
            .map_err(|e| CliError::internal(format!("manifest serialization: {e}")))?;
        std::fs::write(path, text)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
    }
}

/// FNV-1a 64-bit content hash.
pub fn fnv64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
