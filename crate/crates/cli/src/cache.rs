//! Content-addressed result cache.
//!
//! One JSON file per `(operation, canonical parameters, engine version)`
//! triple, named by the SHA-256 of that triple.  The stored entry keeps the
//! rendered result verbatim (as a string), so replaying a hit is
//! byte-identical to the original computation.  Writes go to a temporary
//! file in the same directory and are renamed into place, so a crashed or
//! concurrent process never leaves a partial entry behind.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Engine version embedded in every cache key; bumping the package version
/// invalidates all previous entries.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Identity of one cacheable invocation: the operation name and its
/// canonical (key-sorted) parameter encoding.
pub struct CacheKey {
    pub op: &'static str,
    pub params: Value,
}

/// A replayable result: the exact bytes that were printed and the exit code
/// of the run that produced them.
pub struct CachedResult {
    pub output: String,
    pub exit: i32,
}

impl CacheKey {
    fn canonical(&self) -> String {
        json!({
            "engine": ENGINE_VERSION,
            "op": self.op,
            "params": self.params,
        })
        .to_string()
    }

    fn digest(&self) -> String {
        let hash = Sha256::digest(self.canonical().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, dir: &Path) -> PathBuf {
        dir.join(format!("{}.json", self.digest()))
    }
}

/// Returns the stored result for `key`, or `None` on a miss or an
/// unreadable/foreign entry (treated as a miss, never an error).
pub fn lookup(dir: &Path, key: &CacheKey) -> Option<CachedResult> {
    let raw = fs::read_to_string(key.path(dir)).ok()?;
    let entry: Value = serde_json::from_str(&raw).ok()?;
    if entry["engine"] != json!(ENGINE_VERSION) || entry["op"] != json!(key.op) {
        return None;
    }
    Some(CachedResult {
        output: entry["output"].as_str()?.to_string(),
        exit: entry["exit"].as_i64()? as i32,
    })
}

/// Atomically stores `result` under `key`, creating the directory if
/// needed.
pub fn store(dir: &Path, key: &CacheKey, result: &CachedResult) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let created_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let entry = json!({
        "engine": ENGINE_VERSION,
        "op": key.op,
        "params": key.params,
        "created_at": created_at,
        "output": result.output,
        "exit": result.exit,
    });
    let tmp = dir.join(format!(".tmp-{}-{}", std::process::id(), key.digest()));
    fs::write(&tmp, entry.to_string())?;
    fs::rename(&tmp, key.path(dir))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scratch(tag: &str) -> PathBuf {
        std::env::temp_dir().join(format!("qgrass-cache-test-{tag}-{}", std::process::id()))
    }

    #[test]
    fn digest_ignores_parameter_insertion_order() {
        let a = CacheKey { op: "degree", params: json!({"m": 3, "p": 2, "q": 1}) };
        let b = CacheKey { op: "degree", params: json!({"q": 1, "p": 2, "m": 3}) };
        assert_eq!(a.digest(), b.digest());
        let c = CacheKey { op: "degree", params: json!({"m": 3, "p": 2, "q": 2}) };
        assert_ne!(a.digest(), c.digest());
        let d = CacheKey { op: "poset", params: json!({"m": 3, "p": 2, "q": 1}) };
        assert_ne!(a.digest(), d.digest());
    }

    #[test]
    fn roundtrip_and_miss_behaviour() {
        let dir = scratch("roundtrip");
        let _ = fs::remove_dir_all(&dir);
        let key = CacheKey { op: "degree", params: json!({"m": 2, "p": 2, "q": 0}) };
        assert!(lookup(&dir, &key).is_none(), "empty directory is a miss");

        let result = CachedResult { output: "{\"value\":\"2\"}".into(), exit: 0 };
        store(&dir, &key, &result).unwrap();
        let hit = lookup(&dir, &key).expect("stored entry is found");
        assert_eq!(hit.output, result.output);
        assert_eq!(hit.exit, 0);

        let other = CacheKey { op: "degree", params: json!({"m": 2, "p": 2, "q": 1}) };
        assert!(lookup(&dir, &other).is_none(), "different parameters miss");

        fs::write(key.path(&dir), "not json").unwrap();
        assert!(lookup(&dir, &key).is_none(), "corrupt entries degrade to a miss");

        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn foreign_entries_are_misses() {
        let dir = scratch("foreign");
        let _ = fs::remove_dir_all(&dir);
        let key = CacheKey { op: "vi", params: json!({"K": [1, 2]}) };
        store(&dir, &key, &CachedResult { output: "x".into(), exit: 0 }).unwrap();

        // same digest path, but claiming a different engine version
        let mut entry: Value =
            serde_json::from_str(&fs::read_to_string(key.path(&dir)).unwrap()).unwrap();
        entry["engine"] = json!("0.0.0-other");
        fs::write(key.path(&dir), entry.to_string()).unwrap();
        assert!(lookup(&dir, &key).is_none(), "version mismatch is a miss");

        fs::remove_dir_all(&dir).unwrap();
    }
}
