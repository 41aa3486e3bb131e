//! Memo table for the determinant factors, optionally persisted to a
//! content-addressed on-disk store.
//!
//! One file per key `(n, S, r)`. Entries hold the canonical text form of the
//! polynomial plus a header identifying the key, so a human can inspect them
//! and a reader can verify it picked up the right entry. Concurrent computes
//! of the same key may race; both produce the identical canonical value, so
//! the table behaves like a linearizable memo.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::poset::{PosetIdeal, Position};
use crate::IntPoly;

#[derive(Clone, PartialEq, Eq, Hash)]
struct CacheKey {
    n: usize,
    members: Vec<Position>,
    r: usize,
}

impl CacheKey {
    fn of(ideal: &PosetIdeal, r: usize) -> CacheKey {
        CacheKey {
            n: ideal.n(),
            members: ideal.members().iter().copied().collect(),
            r,
        }
    }

    fn canonical_string(&self) -> String {
        let members: Vec<String> = self
            .members
            .iter()
            .map(|p| format!("[{},{}]", p.i, p.j))
            .collect();
        format!(
            "minor|domain={}|n={}|r={}|S=[{}]",
            <num_bigint::BigInt as Coeff>::domain_name(),
            self.n,
            self.r,
            members.join(",")
        )
    }

    fn file_name(&self) -> String {
        let digest = Sha256::digest(self.canonical_string().as_bytes());
        format!("{:x}.json", digest)
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema: String,
    n: usize,
    ideal: PosetIdeal,
    r: usize,
    domain: String,
    poly: String,
}

/// Memoizes `(n, S, r) -> F_r[S]` in memory and, when a directory is
/// configured, on disk.
pub struct MinorCache {
    mem: Mutex<HashMap<CacheKey, IntPoly>>,
    dir: Option<PathBuf>,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl MinorCache {
    pub fn in_memory() -> MinorCache {
        MinorCache {
            mem: Mutex::new(HashMap::new()),
            dir: None,
        }
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Result<MinorCache> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)
            .map_err(|e| Error::CacheIo(format!("creating {}: {e}", dir.display())))?;
        Ok(MinorCache {
            mem: Mutex::new(HashMap::new()),
            dir: Some(dir),
        })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn get_or_compute(
        &self,
        ideal: &PosetIdeal,
        r: usize,
        compute: impl FnOnce() -> Result<IntPoly>,
    ) -> Result<IntPoly> {
        let key = CacheKey::of(ideal, r);
        if let Some(hit) = self.mem.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        if let Some(poly) = self.load_from_disk(&key, ideal) {
            self.mem
                .lock()
                .expect("cache lock")
                .insert(key, poly.clone());
            return Ok(poly);
        }
        let poly = compute()?;
        self.store_to_disk(&key, ideal, &poly);
        self.mem
            .lock()
            .expect("cache lock")
            .insert(key, poly.clone());
        Ok(poly)
    }

    /// Unreadable, mismatched or corrupt entries are treated as misses.
    fn load_from_disk(&self, key: &CacheKey, ideal: &PosetIdeal) -> Option<IntPoly> {
        let dir = self.dir.as_ref()?;
        let path = dir.join(key.file_name());
        let text = std::fs::read_to_string(path).ok()?;
        let entry: CacheFile = serde_json::from_str(&text).ok()?;
        let header_ok = entry.schema == "1"
            && entry.n == key.n
            && entry.r == key.r
            && entry.domain == <num_bigint::BigInt as Coeff>::domain_name()
            && &entry.ideal == ideal;
        if !header_ok {
            return None;
        }
        entry.poly.parse().ok()
    }

    fn store_to_disk(&self, key: &CacheKey, ideal: &PosetIdeal, poly: &IntPoly) {
        let Some(dir) = self.dir.as_ref() else {
            return;
        };
        let entry = CacheFile {
            schema: "1".into(),
            n: key.n,
            ideal: ideal.clone(),
            r: key.r,
            domain: <num_bigint::BigInt as Coeff>::domain_name().into(),
            poly: poly.to_string(),
        };
        let Ok(json) = serde_json::to_string_pretty(&entry) else {
            return;
        };
        // write-then-rename keeps concurrent writers from exposing partial files
        let tmp = dir.join(format!(
            ".tmp-{}-{}",
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        if std::fs::write(&tmp, json).is_ok() {
            let _ = std::fs::rename(&tmp, dir.join(key.file_name()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarId;
    use std::sync::atomic::AtomicUsize;

    #[test]
    fn memoizes_in_memory() {
        let cache = MinorCache::in_memory();
        let ideal = PosetIdeal::empty(2);
        let calls = AtomicUsize::new(0);
        for _ in 0..3 {
            let got = cache
                .get_or_compute(&ideal, 1, || {
                    calls.fetch_add(1, Ordering::SeqCst);
                    Ok(IntPoly::var(VarId::x(1, 1)))
                })
                .unwrap();
            assert_eq!(got, IntPoly::var(VarId::x(1, 1)));
        }
        assert_eq!(calls.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn disk_entries_survive_cache_instances() {
        let dir = tempfile::tempdir().unwrap();
        let ideal = PosetIdeal::new(2, [Position::new(2, 1)]).unwrap();
        let value = IntPoly::var(VarId::x(1, 2));
        {
            let cache = MinorCache::with_dir(dir.path()).unwrap();
            cache
                .get_or_compute(&ideal, 2, || Ok(value.clone()))
                .unwrap();
        }
        let cache = MinorCache::with_dir(dir.path()).unwrap();
        let got = cache
            .get_or_compute(&ideal, 2, || panic!("should be a disk hit"))
            .unwrap();
        assert_eq!(got, value);
        // a different key still computes
        let other = cache
            .get_or_compute(&ideal, 1, || Ok(IntPoly::one()))
            .unwrap();
        assert_eq!(other, IntPoly::one());
    }

    #[test]
    fn corrupt_entries_fall_back_to_compute() {
        let dir = tempfile::tempdir().unwrap();
        let ideal = PosetIdeal::empty(2);
        let key = CacheKey::of(&ideal, 1);
        std::fs::write(dir.path().join(key.file_name()), "not json").unwrap();
        let cache = MinorCache::with_dir(dir.path()).unwrap();
        let got = cache
            .get_or_compute(&ideal, 1, || Ok(IntPoly::one()))
            .unwrap();
        assert_eq!(got, IntPoly::one());
    }
}
