use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const CONFIG_ECHO_FILE: &str = "config.toml";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

/// Record of one completed stage: what it read and what it wrote, by hash.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageManifest {
    pub stage: String,
    pub config_sha256: String,
    /// Input label (a path or an upstream stage output) to hash.
    pub inputs: BTreeMap<String, String>,
    /// Output file name, relative to the stage directory, to hash.
    pub outputs: BTreeMap<String, String>,
}

impl StageManifest {
    pub fn new(stage: &str, config_sha256: &str) -> Self {
        Self {
            stage: stage.to_owned(),
            config_sha256: config_sha256.to_owned(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
        }
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
        Ok(serde_json::from_slice(&bytes)?)
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        write_file(&dir.join(MANIFEST_FILE), &to_pretty_json(self)?)
    }

    /// Checks that every recorded output is still on disk unchanged and that
    /// the stage ran under the same config.
    pub fn verify(&self, dir: &Path, config_sha256: &str) -> Result<()> {
        if self.config_sha256 != config_sha256 {
            return Err(Error::Stage {
                stage: self.stage.clone(),
                detail: "ran under a different config; rerun it".into(),
            });
        }
        for (name, hash) in &self.outputs {
            let path = dir.join(name);
            let actual = sha256_file(&path).map_err(|_| Error::Stage {
                stage: self.stage.clone(),
                detail: format!("output {} is missing", path.display()),
            })?;
            if &actual != hash {
                return Err(Error::Stage {
                    stage: self.stage.clone(),
                    detail: format!("output {} changed since the stage ran", path.display()),
                });
            }
        }
        Ok(())
    }
}

pub(crate) fn to_pretty_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Writes the outputs of one stage into its directory and records them.
pub(crate) struct StageWriter {
    pub dir: PathBuf,
    pub manifest: StageManifest,
}

impl StageWriter {
    pub fn new(out_root: &Path, stage: &str, config_toml: &str) -> Result<Self> {
        let dir = out_root.join(stage);
        if dir.exists() {
            std::fs::remove_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        }
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let mut w = Self { dir, manifest: StageManifest::new(stage, &sha256_hex(config_toml.as_bytes())) };
        w.write(CONFIG_ECHO_FILE, config_toml.as_bytes())?;
        Ok(w)
    }

    pub fn input(&mut self, label: impl Into<String>, hash: String) {
        self.manifest.inputs.insert(label.into(), hash);
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        write_file(&self.dir.join(name), bytes)?;
        self.manifest.outputs.insert(name.to_owned(), sha256_hex(bytes));
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.write(name, &to_pretty_json(value)?)
    }

    pub fn finish(self) -> Result<StageManifest> {
        self.manifest.save(&self.dir)?;
        Ok(self.manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn verify_detects_tampering() {
        let tmp = tempfile::tempdir().unwrap();
        let mut w = StageWriter::new(tmp.path(), "ingest", "seed = 0\n").unwrap();
        w.write("a.txt", b"hello").unwrap();
        let m = w.finish().unwrap();
        let dir = tmp.path().join("ingest");
        let cfg_hash = sha256_hex(b"seed = 0\n");
        m.verify(&dir, &cfg_hash).unwrap();
        assert!(matches!(m.verify(&dir, "other"), Err(Error::Stage { .. })));
        std::fs::write(dir.join("a.txt"), b"bye").unwrap();
        assert!(matches!(m.verify(&dir, &cfg_hash), Err(Error::Stage { .. })));
        assert_eq!(StageManifest::load(&dir).unwrap(), m);
    }
}
