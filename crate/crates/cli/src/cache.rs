//! Content-addressed report cache. An entry's key digests the engine
//! version, the command echo and every input file; the stored body is
//! checked against its own digest on read.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const ENGINE: &str = concat!("ramseylab ", env!("CARGO_PKG_VERSION"));
const LAYOUT: &str = "v1";

#[derive(Serialize, Deserialize)]
pub struct Entry {
    pub engine: String,
    pub key: String,
    pub command: serde_json::Value,
    pub budget_bell: u128,
    pub body_sha256: String,
    pub body: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub struct Cache {
    root: PathBuf,
}

pub enum Lookup {
    Hit(String),
    Miss,
    Corrupt(String),
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        let root = dir.join(LAYOUT);
        fs::create_dir_all(&root).with_context(|| format!("creating cache directory {}", root.display()))?;
        Ok(Cache { root })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.root.join(&key[..2]).join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Lookup {
        let path = self.path(key);
        let Ok(text) = fs::read_to_string(&path) else {
            return Lookup::Miss;
        };
        match serde_json::from_str::<Entry>(&text) {
            Ok(e) if e.engine != ENGINE => Lookup::Miss,
            Ok(e) if e.key == key && sha256_hex(e.body.as_bytes()) == e.body_sha256 => Lookup::Hit(e.body),
            Ok(_) => Lookup::Corrupt("digest mismatch".into()),
            Err(err) => Lookup::Corrupt(err.to_string()),
        }
    }

    /// Writes to a temporary file in the same directory, then renames.
    pub fn put(&self, entry: &Entry) -> Result<()> {
        let path = self.path(&entry.key);
        let dir = path.parent().expect("entry has a parent");
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(".{}.{}.tmp", entry.key, std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string(entry)?.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn entries(&self) -> Result<Vec<(PathBuf, fs::Metadata)>> {
        let mut out = Vec::new();
        for shard in fs::read_dir(&self.root)? {
            let shard = shard?.path();
            if !shard.is_dir() {
                continue;
            }
            for file in fs::read_dir(&shard)? {
                let file = file?.path();
                if file.extension().is_some_and(|e| e == "json") {
                    let meta = fs::metadata(&file)?;
                    out.push((file, meta));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    pub fn read_entry(path: &Path) -> Option<Entry> {
        serde_json::from_str(&fs::read_to_string(path).ok()?).ok()
    }

    /// Returns (removed, kept, bytes kept).
    pub fn gc(&self, max_bytes: Option<u64>, max_age: Option<Duration>) -> Result<(usize, usize, u64)> {
        let now = SystemTime::now();
        let mut removed = 0;
        let mut live = Vec::new();
        for (path, meta) in self.entries()? {
            let stale = Self::read_entry(&path).is_none_or(|e| e.engine != ENGINE);
            let modified = meta.modified().unwrap_or(now);
            let too_old = max_age.is_some_and(|age| now.duration_since(modified).unwrap_or_default() > age);
            if stale || too_old {
                fs::remove_file(&path)?;
                removed += 1;
            } else {
                live.push((modified, path, meta.len()));
            }
        }
        live.sort();
        let mut total: u64 = live.iter().map(|e| e.2).sum();
        let mut kept = live.len();
        if let Some(limit) = max_bytes {
            for (_, path, len) in &live {
                if total <= limit {
                    break;
                }
                fs::remove_file(path)?;
                total -= len;
                removed += 1;
                kept -= 1;
            }
        }
        Ok((removed, kept, total))
    }

    pub fn clear(&self) -> Result<usize> {
        let entries = self.entries()?;
        for (path, _) in &entries {
            fs::remove_file(path)?;
        }
        Ok(entries.len())
    }
}
