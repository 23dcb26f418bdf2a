//! Append-only JSON Lines result cache. One process owns the file for
//! writing; readers tolerate a torn final line (a crash mid-append) by
//! skipping it. A record is keyed by (op, canonical params, prec, trunc)
//! and is only served back when the recorded tool version matches the
//! running one, so upgrades silently invalidate stale values.

use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CacheRecord {
    pub op: String,
    /// Canonicalized `key=value` parameter string, keys sorted.
    pub params: String,
    pub prec: u32,
    /// Truncation knobs that affect the value (series caps and the like).
    pub trunc: Vec<i64>,
    /// Decimal string value(s), exactly as the report layer renders them.
    pub value: Vec<String>,
    pub created_at: String,
    pub tool_version: String,
}

impl CacheRecord {
    pub fn new(op: &str, params: &str, prec: u32, trunc: Vec<i64>, value: Vec<String>) -> Self {
        CacheRecord {
            op: op.to_string(),
            params: params.to_string(),
            prec,
            trunc,
            value,
            created_at: chrono::Utc::now().to_rfc3339(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    fn key(&self) -> (&str, &str, u32, &[i64]) {
        (&self.op, &self.params, self.prec, &self.trunc)
    }
}

/// Sorted `key=value` join, the canonical parameter form for cache keys.
pub fn canonical_params(entries: &[(&str, String)]) -> String {
    let mut pairs: Vec<String> = entries.iter().map(|(k, v)| format!("{k}={v}")).collect();
    pairs.sort();
    pairs.join(",")
}

#[derive(Clone, Debug, Serialize)]
pub struct CacheStats {
    pub path: PathBuf,
    pub total_records: usize,
    pub distinct_keys: usize,
    pub malformed_lines: usize,
    pub stale_version: usize,
}

pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn new(path: &Path) -> Self {
        Cache {
            path: path.to_path_buf(),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn read_all(&self) -> (Vec<CacheRecord>, usize) {
        let file = match std::fs::File::open(&self.path) {
            Ok(f) => f,
            Err(_) => return (Vec::new(), 0),
        };
        let mut records = Vec::new();
        let mut malformed = 0usize;
        for line in BufReader::new(file).lines() {
            let line = match line {
                Ok(l) => l,
                Err(_) => {
                    malformed += 1;
                    break;
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheRecord>(&line) {
                Ok(rec) => records.push(rec),
                Err(_) => malformed += 1,
            }
        }
        (records, malformed)
    }

    /// Latest record under the key with a matching tool version; a version
    /// mismatch is a miss, which forces recomputation.
    pub fn get(&self, op: &str, params: &str, prec: u32, trunc: &[i64]) -> Option<CacheRecord> {
        let (records, _) = self.read_all();
        records
            .into_iter()
            .rev()
            .find(|r| r.key() == (op, params, prec, trunc))
            .filter(|r| r.tool_version == env!("CARGO_PKG_VERSION"))
    }

    pub fn put(&self, record: &CacheRecord) -> Result<()> {
        if let Some(dir) = self.path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        let mut line = serde_json::to_string(record)?;
        line.push('\n');
        f.write_all(line.as_bytes())?;
        Ok(())
    }

    pub fn stats(&self) -> CacheStats {
        let (records, malformed) = self.read_all();
        let mut keys: Vec<String> = records
            .iter()
            .map(|r| format!("{}|{}|{}|{:?}", r.op, r.params, r.prec, r.trunc))
            .collect();
        keys.sort();
        keys.dedup();
        let stale = records
            .iter()
            .filter(|r| r.tool_version != env!("CARGO_PKG_VERSION"))
            .count();
        CacheStats {
            path: self.path.clone(),
            total_records: records.len(),
            distinct_keys: keys.len(),
            malformed_lines: malformed,
            stale_version: stale,
        }
    }

    pub fn clear(&self) -> Result<()> {
        if self.path.exists() {
            std::fs::remove_file(&self.path)?;
        }
        Ok(())
    }
}
