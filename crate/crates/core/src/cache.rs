//! Content-addressed result cache for CLI commands.
//!
//! A request descriptor is the canonical JSON of the command and all inputs
//! that determine its output (sorted keys, compact separators); its SHA-256
//! digest addresses the cached bytes under `<root>/<hh>/<digest>.json`.
//! Writes go through a temp file and an atomic rename.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Error;

pub const CACHE_ENV_VAR: &str = "NBL_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".nbl-cache";

#[derive(Debug, Clone)]
pub struct RequestDescriptor {
    canonical: String,
}

impl RequestDescriptor {
    /// Canonicalizes a JSON value: object keys sorted, compact encoding.
    /// `serde_json`'s maps are ordered, so serializing a normalized value is
    /// already canonical; normalization recurses through arrays.
    pub fn new(value: &Value) -> Self {
        let canonical = serde_json::to_string(&normalize(value)).expect("value serializes");
        RequestDescriptor { canonical }
    }

    pub fn canonical_json(&self) -> &str {
        &self.canonical
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.canonical.as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn normalize(value: &Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut out = serde_json::Map::new();
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for k in keys {
                out.insert(k.clone(), normalize(&map[k]));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.iter().map(normalize).collect()),
        other => other.clone(),
    }
}

pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    /// Root from the environment variable, falling back to the default.
    pub fn from_env() -> Self {
        let root = std::env::var(CACHE_ENV_VAR)
            .map(PathBuf::from)
            .unwrap_or_else(|_| PathBuf::from(DEFAULT_CACHE_DIR));
        Cache { root }
    }

    fn path_for(&self, digest: &str) -> PathBuf {
        self.root.join(&digest[..2]).join(format!("{digest}.json"))
    }

    pub fn lookup(&self, descriptor: &RequestDescriptor) -> Option<Vec<u8>> {
        fs::read(self.path_for(&descriptor.digest())).ok()
    }

    pub fn store(&self, descriptor: &RequestDescriptor, bytes: &[u8]) -> Result<(), Error> {
        let path = self.path_for(&descriptor.digest());
        let dir = path.parent().expect("cache paths have parents");
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(
            ".tmp-{}-{}",
            std::process::id(),
            descriptor.digest()
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(bytes)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn root(&self) -> &Path {
        &self.root
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn descriptor_is_order_insensitive() {
        let a = RequestDescriptor::new(&json!({"b": 1, "a": {"y": 2, "x": 3}}));
        let b = RequestDescriptor::new(&json!({"a": {"x": 3, "y": 2}, "b": 1}));
        assert_eq!(a.digest(), b.digest());
        assert_eq!(a.canonical_json(), r#"{"a":{"x":3,"y":2},"b":1}"#);
    }

    #[test]
    fn distinct_requests_distinct_digests() {
        let a = RequestDescriptor::new(&json!({"cmd": "classes", "group": "S3"}));
        let b = RequestDescriptor::new(&json!({"cmd": "classes", "group": "S4"}));
        assert_ne!(a.digest(), b.digest());
    }

    #[test]
    fn store_then_lookup_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let d = RequestDescriptor::new(&json!({"cmd": "x"}));
        assert!(cache.lookup(&d).is_none());
        cache.store(&d, b"{\"ok\":true}").unwrap();
        assert_eq!(cache.lookup(&d).unwrap(), b"{\"ok\":true}");
        // layout: <root>/<hh>/<digest>.json
        let digest = d.digest();
        assert!(dir.path().join(&digest[..2]).join(format!("{digest}.json")).exists());
    }
}
