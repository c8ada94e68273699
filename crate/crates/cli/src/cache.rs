//! Append-only JSON-lines memo of generic `alpha` computations.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use seshadri::fatpoints::{AlphaResult, SearchMode};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub n: usize,
    pub r: usize,
    pub mults: Vec<u32>,
    pub primes: Vec<u64>,
    pub seed: u64,
    pub trials: u32,
    pub mode: SearchMode,
    /// Search bracket `[1, expected_alpha]`.
    pub degree_range: [u32; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub value: AlphaResult,
    pub version: String,
    pub timestamp: u64,
}

#[derive(Debug, Default)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
    pub rechecked: usize,
    pub mismatches: usize,
}

pub struct Cache {
    path: PathBuf,
    entries: HashMap<CacheKey, AlphaResult>,
    pub stats: CacheStats,
}

impl Cache {
    /// Load entries written by this toolkit version; later lines win.
    pub fn open(path: &Path) -> Result<Self> {
        let mut entries = HashMap::new();
        if path.exists() {
            let file = File::open(path).with_context(|| format!("opening cache {}", path.display()))?;
            file.lock_shared()?;
            for (i, line) in BufReader::new(&file).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let entry: CacheEntry = serde_json::from_str(&line)
                    .with_context(|| format!("{}:{}: malformed cache entry", path.display(), i + 1))?;
                if entry.version == VERSION {
                    entries.insert(entry.key, entry.value);
                }
            }
            file.unlock()?;
        }
        Ok(Cache { path: path.to_path_buf(), entries, stats: CacheStats::default() })
    }

    pub fn get(&self, key: &CacheKey) -> Option<&AlphaResult> {
        self.entries.get(key)
    }

    /// Append one entry under an exclusive lock.
    pub fn put(&mut self, key: CacheKey, value: AlphaResult) -> Result<()> {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let entry = CacheEntry { key: key.clone(), value: value.clone(), version: VERSION.into(), timestamp };
        let mut line = serde_json::to_string(&entry)?;
        line.push('\n');
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening cache {}", self.path.display()))?;
        file.lock()?;
        file.write_all(line.as_bytes())?;
        file.flush()?;
        file.unlock()?;
        self.entries.insert(key, value);
        Ok(())
    }
}
