//! Shared memo table from canonical component strings to SG values, with a
//! line-oriented text persistence format:
//!
//! ```text
//! ITCX-CACHE v1 k=3 reductions=on
//! [2X5]<TAB>1
//! ```
//!
//! Concurrent inserts of the same key always carry the same value, so a
//! racing writer is harmless; a reader that misses an in-flight insert just
//! recomputes.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use dashmap::DashMap;

use crate::error::CacheError;
use crate::notation::parse_board;
use crate::reduce::ReductionMode;
use crate::solver::SgValue;

const MAGIC: &str = "ITCX-CACHE";
const VERSION: &str = "v1";

pub struct MemoCache {
    k: usize,
    reductions: ReductionMode,
    map: DashMap<String, SgValue>,
}

impl MemoCache {
    pub fn new(k: usize, reductions: ReductionMode) -> Self {
        MemoCache { k, reductions, map: DashMap::new() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn reductions(&self) -> ReductionMode {
        self.reductions
    }

    #[inline]
    pub fn get(&self, key: &str) -> Option<SgValue> {
        self.map.get(key).map(|v| *v)
    }

    #[inline]
    pub fn insert(&self, key: String, value: SgValue) {
        let previous = self.map.insert(key, value);
        debug_assert!(previous.is_none_or(|p| p == value), "conflicting cache entries");
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn clear(&self) {
        self.map.clear();
    }

    pub fn header(&self) -> String {
        format!("{MAGIC} {VERSION} k={} reductions={}", self.k, self.reductions)
    }

    /// All entries sorted by key.
    pub fn entries(&self) -> Vec<(String, SgValue)> {
        let mut out: Vec<(String, SgValue)> = self.map.iter().map(|e| (e.key().clone(), *e.value())).collect();
        out.sort_unstable();
        out
    }

    /// Writes the cache with entries in sorted order, so equal caches produce
    /// identical files.
    pub fn save(&self, path: &Path) -> Result<(), CacheError> {
        let io = |source| CacheError::Io { path: path.to_path_buf(), source };
        let file = fs::File::create(path).map_err(io)?;
        let mut out = BufWriter::new(file);
        writeln!(out, "{}", self.header()).map_err(io)?;
        for (key, value) in self.entries() {
            writeln!(out, "{key}\t{value}").map_err(io)?;
        }
        out.flush().map_err(io)
    }

    /// Loads a cache written for the same `k` and reduction mode.
    pub fn load(path: &Path, k: usize, reductions: ReductionMode) -> Result<Self, CacheError> {
        let io = |source| CacheError::Io { path: path.to_path_buf(), source };
        let file = fs::File::open(path).map_err(io)?;
        let mut lines = BufReader::new(file).lines();
        let header = lines.next().transpose().map_err(io)?.unwrap_or_default();
        let cache = MemoCache::new(k, reductions);
        let (found_k, found_mode) = parse_header(&header).ok_or_else(|| CacheError::BadHeader {
            path: path.to_path_buf(),
            found: header.clone(),
        })?;
        if found_k != k || found_mode != reductions {
            return Err(CacheError::Mismatch {
                path: path.to_path_buf(),
                found: format!("k={found_k} reductions={found_mode}"),
                expected: format!("k={k} reductions={reductions}"),
            });
        }
        for (i, line) in lines.enumerate() {
            let line = line.map_err(io)?;
            if line.is_empty() {
                continue;
            }
            let bad = |reason: String| CacheError::BadEntry { path: path.to_path_buf(), line: i + 2, reason };
            let (key, value) = line.split_once('\t').ok_or_else(|| bad("missing tab".into()))?;
            let value: SgValue = value.parse().map_err(|e| bad(format!("bad value: {e}")))?;
            parse_board(key, k).map_err(|e| bad(format!("bad position: {e}")))?;
            cache.map.insert(key.to_string(), value);
        }
        Ok(cache)
    }

    /// Loads `path` if it exists, otherwise starts empty.
    pub fn load_or_new(path: &Path, k: usize, reductions: ReductionMode) -> Result<Self, CacheError> {
        if path.exists() {
            Self::load(path, k, reductions)
        } else {
            Ok(Self::new(k, reductions))
        }
    }
}

impl std::fmt::Debug for MemoCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MemoCache")
            .field("k", &self.k)
            .field("reductions", &self.reductions)
            .field("entries", &self.map.len())
            .finish()
    }
}

fn parse_header(line: &str) -> Option<(usize, ReductionMode)> {
    let mut parts = line.split_whitespace();
    if parts.next()? != MAGIC || parts.next()? != VERSION {
        return None;
    }
    let k = parts.next()?.strip_prefix("k=")?.parse().ok()?;
    let mode = ReductionMode::from_name(parts.next()?.strip_prefix("reductions=")?)?;
    parts.next().is_none().then_some((k, mode))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        let cache = MemoCache::new(3, ReductionMode::Full);
        cache.insert("[5]".into(), 1);
        cache.insert("[2X2]".into(), 0);
        cache.save(&path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "ITCX-CACHE v1 k=3 reductions=on\n[2X2]\t0\n[5]\t1\n");
        let back = MemoCache::load(&path, 3, ReductionMode::Full).unwrap();
        assert_eq!(back.entries(), cache.entries());
    }

    #[test]
    fn mismatched_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        MemoCache::new(3, ReductionMode::Full).save(&path).unwrap();
        assert!(matches!(MemoCache::load(&path, 3, ReductionMode::Off), Err(CacheError::Mismatch { .. })));
        assert!(matches!(MemoCache::load(&path, 4, ReductionMode::Full), Err(CacheError::Mismatch { .. })));
        fs::write(&path, "ITCX-CACHE v2 k=3 reductions=on\n").unwrap();
        assert!(matches!(MemoCache::load(&path, 3, ReductionMode::Full), Err(CacheError::BadHeader { .. })));
    }

    #[test]
    fn malformed_entries_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        fs::write(&path, "ITCX-CACHE v1 k=3 reductions=on\n[5] 1\n").unwrap();
        let err = MemoCache::load(&path, 3, ReductionMode::Full).unwrap_err();
        assert!(matches!(err, CacheError::BadEntry { line: 2, .. }));
        fs::write(&path, "ITCX-CACHE v1 k=3 reductions=on\n[XXX]\t1\n").unwrap();
        assert!(MemoCache::load(&path, 3, ReductionMode::Full).is_err());
    }
}
