//! Content-addressed result cache: one immutable JSON file per key, published by rename.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

pub const ENV_VAR: &str = "REESLAB_CACHE";
pub const DEFAULT_DIR: &str = ".reeslab-cache";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

/// How a value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    /// an unreadable entry was replaced
    Repaired,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$REESLAB_CACHE`, else `./.reeslab-cache`.
    pub fn from_env() -> Self {
        Cache::new(std::env::var_os(ENV_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_DIR)))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    fn read(&self, key: &str) -> Option<Result<Value, String>> {
        let bytes = std::fs::read(self.path_for(key)).ok()?;
        let parsed = serde_json::from_slice::<Value>(&bytes).map_err(|e| e.to_string()).and_then(|v| {
            if v["key"] != json!(key) {
                return Err("key mismatch".into());
            }
            v.get("value").cloned().ok_or_else(|| "entry has no value".to_string())
        });
        Some(parsed)
    }

    /// Cached value for `key`, or run `producer` and publish its value atomically.
    /// Producer errors are returned as is and never stored.
    pub fn lookup_store<E>(&self, key: &str, producer: impl FnOnce() -> Result<Value, E>) -> Result<(Value, Lookup), E> {
        let mut outcome = Lookup::Miss;
        match self.read(key) {
            Some(Ok(v)) => return Ok((v, Lookup::Hit)),
            Some(Err(why)) => {
                eprintln!("warning: corrupt cache entry {} ({why}); recomputing", self.path_for(key).display());
                outcome = Lookup::Repaired;
            }
            None => {}
        }
        let value = producer()?;
        if let Err(e) = self.publish(key, &value, outcome == Lookup::Repaired) {
            eprintln!("warning: could not write cache entry {}: {e}", self.path_for(key).display());
        }
        Ok((value, outcome))
    }

    fn publish(&self, key: &str, value: &Value, overwrite: bool) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let entry = json!({"key": key, "created": created, "value": value});
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        tmp.as_file().sync_all()?;
        let target = self.path_for(key);
        if overwrite {
            tmp.persist(&target).map_err(|e| e.error)?;
        } else {
            // Entries are immutable: a concurrent writer that got there first wins.
            match tmp.persist_noclobber(&target) {
                Ok(_) => {}
                Err(e) if e.error.kind() == std::io::ErrorKind::AlreadyExists => {}
                Err(e) => return Err(e.error),
            }
        }
        Ok(())
    }
}
