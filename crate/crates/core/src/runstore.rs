//! Append-only, resumable persistence of every pipeline stage.
//!
//! A run directory holds `manifest.json`, one JSON-lines file per stream and
//! a `report/` directory. Each stream has an idempotence key per record
//! (for answers and scores: task × model), so re-running a stage never
//! duplicates work.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs::{self, File, OpenOptions, TryLockError};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::hashing::content_hash;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stream {
    Seeds,
    Faults,
    Mutants,
    Tasks,
    Answers,
    Verdicts,
    Scores,
}

impl Stream {
    pub const ALL: [Stream; 7] = [
        Stream::Seeds,
        Stream::Faults,
        Stream::Mutants,
        Stream::Tasks,
        Stream::Answers,
        Stream::Verdicts,
        Stream::Scores,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stream::Seeds => "seeds",
            Stream::Faults => "faults",
            Stream::Mutants => "mutants",
            Stream::Tasks => "tasks",
            Stream::Answers => "answers",
            Stream::Verdicts => "verdicts",
            Stream::Scores => "scores",
        }
    }

    pub fn file_name(self) -> String {
        format!("{}.jsonl", self.name())
    }

    /// Idempotence key of a serialized record.
    pub fn key_of(self, record: &Value) -> Option<String> {
        let field = |path: &[&str]| -> Option<String> {
            let mut v = record;
            for p in path {
                v = v.get(p)?;
            }
            v.as_str().filter(|s| !s.is_empty()).map(str::to_string)
        };
        match self {
            Stream::Seeds => field(&["seed_id"]),
            Stream::Faults => field(&["fault", "fault_id"]),
            Stream::Mutants => field(&["mutant_id"]),
            Stream::Tasks => field(&["task_id"]),
            Stream::Verdicts => field(&["fault_task_id"]),
            Stream::Answers | Stream::Scores => Some(answer_key(&field(&["task_id"])?, &field(&["model_name"])?)),
        }
    }
}

impl fmt::Display for Stream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Key of an answer or score record.
pub fn answer_key(task_id: &str, model_name: &str) -> String {
    format!("{task_id}\u{1f}{model_name}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub run_id: String,
    pub created_unix_s: u64,
    pub config: Value,
    pub config_hash: String,
    pub rng_seed: u64,
    pub corpus_hash: String,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(config: Value, rng_seed: u64, corpus_hash: String) -> Self {
        let config_hash = content_hash(config.to_string());
        let created_unix_s = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        RunManifest {
            run_id: content_hash(format!("{config_hash}:{created_unix_s}")),
            created_unix_s,
            config,
            config_hash,
            rng_seed,
            corpus_hash,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("run store i/o at {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{stream} record violates its schema: {reason}")]
    SchemaViolation { stream: Stream, reason: String },
    #[error("run directory {0} is locked by another process")]
    RunLocked(PathBuf),
    #[error("{stream} already holds a record with key {key}")]
    Duplicate { stream: Stream, key: String },
    #[error("configuration changed since the run was created (stored {stored}, current {current}); use a new run directory")]
    ConfigMismatch { stored: String, current: String },
    #[error("{0} has no manifest.json")]
    MissingManifest(PathBuf),
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io { path: path.to_path_buf(), source }
}

/// An open run. Holding it holds the directory's writer lock.
#[derive(Debug)]
pub struct RunStore {
    dir: PathBuf,
    manifest: RunManifest,
    keys: HashMap<Stream, HashSet<String>>,
    writers: HashMap<Stream, File>,
    _lock: File,
}

impl RunStore {
    /// Opens `dir`, creating it with `manifest` if new.
    ///
    /// An existing run must have the same config hash. Any trailing partial
    /// record left by a crash is discarded.
    pub fn open(dir: &Path, manifest: RunManifest) -> Result<Self, StoreError> {
        let mut store = Self::open_existing_or_new(dir, Some(manifest))?;
        store.recover()?;
        Ok(store)
    }

    /// Opens an existing run without checking its configuration.
    pub fn open_existing(dir: &Path) -> Result<Self, StoreError> {
        let mut store = Self::open_existing_or_new(dir, None)?;
        store.recover()?;
        Ok(store)
    }

    fn open_existing_or_new(dir: &Path, manifest: Option<RunManifest>) -> Result<Self, StoreError> {
        fs::create_dir_all(dir).map_err(io(dir))?;
        let lock_path = dir.join(".lock");
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)
            .map_err(io(&lock_path))?;
        match lock.try_lock() {
            Ok(()) => {}
            Err(TryLockError::WouldBlock) => return Err(StoreError::RunLocked(dir.to_path_buf())),
            Err(TryLockError::Error(e)) => return Err(io(&lock_path)(e)),
        }
        let manifest_path = dir.join("manifest.json");
        let stored: Option<RunManifest> = if manifest_path.exists() {
            let text = fs::read_to_string(&manifest_path).map_err(io(&manifest_path))?;
            Some(serde_json::from_str(&text).map_err(|e| StoreError::Io {
                path: manifest_path.clone(),
                source: e.into(),
            })?)
        } else {
            None
        };
        let manifest = match (stored, manifest) {
            (Some(stored), Some(current)) if stored.config_hash != current.config_hash => {
                return Err(StoreError::ConfigMismatch {
                    stored: stored.config_hash,
                    current: current.config_hash,
                })
            }
            (Some(stored), _) => stored,
            (None, Some(current)) => {
                let text = serde_json::to_string_pretty(&current).expect("manifest serializes");
                fs::write(&manifest_path, text + "\n").map_err(io(&manifest_path))?;
                current
            }
            (None, None) => return Err(StoreError::MissingManifest(dir.to_path_buf())),
        };
        Ok(RunStore {
            dir: dir.to_path_buf(),
            manifest,
            keys: HashMap::new(),
            writers: HashMap::new(),
            _lock: lock,
        })
    }

    /// Truncates partial trailing lines and loads every stream's keys.
    fn recover(&mut self) -> Result<(), StoreError> {
        for stream in Stream::ALL {
            let path = self.path(stream);
            if !path.exists() {
                self.keys.insert(stream, HashSet::new());
                continue;
            }
            let bytes = fs::read(&path).map_err(io(&path))?;
            let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
            if keep < bytes.len() {
                log::warn!("{}: discarding {} byte(s) of partial record", path.display(), bytes.len() - keep);
                let file = OpenOptions::new().write(true).open(&path).map_err(io(&path))?;
                file.set_len(keep as u64).map_err(io(&path))?;
                file.sync_all().map_err(io(&path))?;
            }
            let mut keys = HashSet::new();
            for (n, line) in bytes[..keep].split(|&b| b == b'\n').enumerate() {
                if line.is_empty() {
                    continue;
                }
                let value: Value = serde_json::from_slice(line).map_err(|e| StoreError::SchemaViolation {
                    stream,
                    reason: format!("line {}: {e}", n + 1),
                })?;
                let key = stream.key_of(&value).ok_or_else(|| StoreError::SchemaViolation {
                    stream,
                    reason: format!("line {}: missing key fields", n + 1),
                })?;
                keys.insert(key);
            }
            self.keys.insert(stream, keys);
        }
        Ok(())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn manifest(&self) -> &RunManifest {
        &self.manifest
    }

    pub fn path(&self, stream: Stream) -> PathBuf {
        self.dir.join(stream.file_name())
    }

    pub fn report_dir(&self) -> PathBuf {
        self.dir.join("report")
    }

    pub fn contains(&self, stream: Stream, key: &str) -> bool {
        self.keys.get(&stream).is_some_and(|k| k.contains(key))
    }

    pub fn keys(&self, stream: Stream) -> &HashSet<String> {
        &self.keys[&stream]
    }

    pub fn count(&self, stream: Stream) -> usize {
        self.keys[&stream].len()
    }

    /// Appends one record and returns its content hash. Rejects records
    /// whose key is already stored.
    pub fn append<T: Serialize>(&mut self, stream: Stream, record: &T) -> Result<String, StoreError> {
        let value = serde_json::to_value(record).map_err(|e| StoreError::SchemaViolation {
            stream,
            reason: e.to_string(),
        })?;
        if !value.is_object() {
            return Err(StoreError::SchemaViolation {
                stream,
                reason: "records must be JSON objects".into(),
            });
        }
        let key = stream.key_of(&value).ok_or_else(|| StoreError::SchemaViolation {
            stream,
            reason: "missing key fields".into(),
        })?;
        if self.contains(stream, &key) {
            return Err(StoreError::Duplicate { stream, key });
        }
        let line = serde_json::to_string(&value).expect("values serialize") + "\n";
        let path = self.path(stream);
        let file = match self.writers.entry(stream) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(
                OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(&path)
                    .map_err(io(&path))?,
            ),
        };
        file.write_all(line.as_bytes()).map_err(io(&path))?;
        self.keys.get_mut(&stream).expect("loaded").insert(key);
        Ok(content_hash(line.trim_end()))
    }

    /// Appends unless the key is present; returns whether it was written.
    pub fn append_new<T: Serialize>(&mut self, stream: Stream, record: &T) -> Result<bool, StoreError> {
        match self.append(stream, record) {
            Ok(_) => Ok(true),
            Err(StoreError::Duplicate { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Flushes every open stream to disk.
    pub fn sync(&mut self) -> Result<(), StoreError> {
        for (stream, file) in &self.writers {
            file.sync_data().map_err(io(&self.dir.join(stream.file_name())))?;
        }
        Ok(())
    }

    pub fn read<T: DeserializeOwned>(&self, stream: Stream) -> Result<Vec<T>, StoreError> {
        let path = self.path(stream);
        if !path.exists() {
            return Ok(Vec::new());
        }
        let file = File::open(&path).map_err(io(&path))?;
        let mut out = Vec::new();
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(io(&path))?;
            if line.is_empty() {
                continue;
            }
            out.push(serde_json::from_str(&line).map_err(|e| StoreError::SchemaViolation {
                stream,
                reason: format!("line {}: {e}", n + 1),
            })?);
        }
        Ok(out)
    }

    /// Outstanding work per stream: declared keys not yet stored.
    pub fn resume_plan(
        &self,
        current_config_hash: &str,
        declared: &BTreeMap<Stream, Vec<String>>,
    ) -> Result<BTreeMap<Stream, Vec<String>>, StoreError> {
        if current_config_hash != self.manifest.config_hash {
            return Err(StoreError::ConfigMismatch {
                stored: self.manifest.config_hash.clone(),
                current: current_config_hash.to_string(),
            });
        }
        Ok(declared
            .iter()
            .map(|(&stream, keys)| (stream, outstanding(keys, self.keys(stream))))
            .collect())
    }
}

impl Drop for RunStore {
    fn drop(&mut self) {
        let _ = self.sync();
    }
}

/// `declared` minus `stored`, keeping declaration order.
pub fn outstanding(declared: &[String], stored: &HashSet<String>) -> Vec<String> {
    declared.iter().filter(|k| !stored.contains(*k)).cloned().collect()
}
