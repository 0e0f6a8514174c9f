use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use sha2::{Digest, Sha256};

use super::BackendError;

/// Content-addressed response cache.
///
/// Keys hash (backend identity, template hash, input). With a directory the
/// cache persists across runs, which makes long generation jobs resumable.
#[derive(Debug, Default)]
pub struct ResponseCache {
    dir: Option<PathBuf>,
    memory: Mutex<HashMap<String, String>>,
    key_locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
    write_lock: Mutex<()>,
}

pub fn cache_key(identity: &str, template_hash: &str, input: &str) -> String {
    let mut h = Sha256::new();
    for part in [identity, template_hash, input] {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part.as_bytes());
    }
    hex::encode(h.finalize())
}

pub fn content_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl ResponseCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn on_disk(dir: impl Into<PathBuf>) -> Result<Self, BackendError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| BackendError::Cache(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir: Some(dir),
            ..Self::default()
        })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path_for(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(&key[..2]).join(format!("{key}.txt")))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        if let Some(v) = self.memory.lock().unwrap().get(key) {
            return Some(v.clone());
        }
        let value = std::fs::read_to_string(self.path_for(key)?).ok()?;
        self.memory.lock().unwrap().insert(key.to_string(), value.clone());
        Some(value)
    }

    pub fn put(&self, key: &str, value: &str) -> Result<(), BackendError> {
        self.memory.lock().unwrap().insert(key.to_string(), value.to_string());
        let Some(path) = self.path_for(key) else {
            return Ok(());
        };
        let _guard = self.write_lock.lock().unwrap();
        let io = |e: std::io::Error| BackendError::Cache(format!("{}: {e}", path.display()));
        std::fs::create_dir_all(path.parent().expect("cache path has a parent")).map_err(io)?;
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, value).map_err(io)?;
        std::fs::rename(&tmp, &path).map_err(io)
    }

    /// Per-key lock so concurrent identical requests make one round trip.
    pub(crate) fn key_lock(&self, key: &str) -> Arc<Mutex<()>> {
        self.key_locks
            .lock()
            .unwrap()
            .entry(key.to_string())
            .or_default()
            .clone()
    }
}
