//! Output files and the manifest that pins them to their inputs.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::formats::{to_json, FORMAT_VERSION};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub format_version: u32,
    pub command: Vec<String>,
    pub tool_version: &'static str,
    pub inputs: Vec<FileDigest>,
    pub config: serde_json::Value,
    pub outputs: Vec<FileDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn digest_file(path: &Path) -> Result<FileDigest, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(FileDigest { path: path.display().to_string(), sha256: sha256_hex(&bytes) })
}

/// Files produced by one command, written together under `dir`.
pub struct Outputs {
    dir: PathBuf,
    files: Vec<(String, String)>,
}

impl Outputs {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into(), files: Vec::new() }
    }

    pub fn add(&mut self, name: &str, content: String) {
        self.files.push((name.to_string(), content));
    }

    /// Writes every file plus `manifest.json` and returns the written paths.
    pub fn write(self, command: Vec<String>, inputs: &[PathBuf], config: serde_json::Value) -> Result<Vec<PathBuf>, CliError> {
        fs::create_dir_all(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        let mut written = Vec::new();
        let mut outputs = Vec::new();
        for (name, content) in &self.files {
            let path = self.dir.join(name);
            fs::write(&path, content).map_err(|e| CliError::io(&path, e))?;
            outputs.push(FileDigest { path: path.display().to_string(), sha256: sha256_hex(content.as_bytes()) });
            written.push(path);
        }
        let manifest = RunManifest {
            format_version: FORMAT_VERSION,
            command,
            tool_version: env!("CARGO_PKG_VERSION"),
            inputs: inputs.iter().map(|p| digest_file(p)).collect::<Result<_, _>>()?,
            config,
            outputs,
        };
        let path = self.dir.join("manifest.json");
        fs::write(&path, to_json(&manifest)).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
        Ok(written)
    }
}
