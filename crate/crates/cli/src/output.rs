//! Atomic output files and the run manifest.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use kpsum::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn hash_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(sha256_hex(&bytes))
}

/// Collects the files of one run and writes each one atomically: the bytes
/// go to a temporary file in the output directory, which is then renamed
/// over the target.
pub struct OutputDir {
    dir: PathBuf,
    written: BTreeMap<String, String>,
}

impl OutputDir {
    pub fn create(dir: PathBuf) -> Result<Self> {
        std::fs::create_dir_all(&dir).map_err(|source| Error::Io {
            path: dir.clone(),
            source,
        })?;
        Ok(OutputDir {
            dir,
            written: BTreeMap::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<PathBuf> {
        let target = self.dir.join(name);
        let io = |source: std::io::Error| Error::Io {
            path: target.clone(),
            source,
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        tmp.write_all(contents).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(&target).map_err(|e| io(e.error))?;
        self.written.insert(name.to_string(), sha256_hex(contents));
        Ok(target)
    }

    /// Writes `config.toml` and `manifest.json`. The manifest records the
    /// command, the effective configuration and the SHA-256 of every input
    /// and output file; it carries no timestamps so that identical runs
    /// produce identical manifests.
    pub fn finish(mut self, command: &str, config: &RunConfig, inputs: &[&Path]) -> Result<()> {
        self.write("config.toml", config.to_toml().as_bytes())?;
        let mut input_hashes = BTreeMap::new();
        for path in inputs {
            input_hashes.insert(path.display().to_string(), hash_file(path)?);
        }
        let manifest = Manifest {
            command,
            config,
            inputs: input_hashes,
            outputs: self.written.clone(),
        };
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        self.write("manifest.json", json.as_bytes())?;
        Ok(())
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config: &'a RunConfig,
    inputs: BTreeMap<String, String>,
    outputs: BTreeMap<String, String>,
}

/// File-name-safe form of a topic id.
pub fn file_stem(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}
