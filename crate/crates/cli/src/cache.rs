//! Persistent character and Kronecker-coefficient cache.
//!
//! The file is advisory: a missing file starts empty, a file locked by
//! another process is skipped, and every load spot-checks random entries
//! against a fresh computation before trusting the rest.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions, TryLockError};
use std::path::{Path, PathBuf};

use kronpoly::kronecker::{kronecker_coefficient_with, KronCache};
use kronpoly::{CharacterCache, Partition};
use num_bigint::BigInt;
use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const CACHE_VERSION: u32 = 1;
pub const SPOT_CHECKS: usize = 100;

/// On-disk form. Character keys are `"shape|cycle type"`, Kronecker keys
/// `"mu|nu|lambda"`, each partition in `4,2,1` form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub version: u32,
    pub character_entries: BTreeMap<String, String>,
    pub kron_entries: BTreeMap<String, u64>,
}

fn parse_key<const N: usize>(key: &str) -> CliResult<[Partition; N]> {
    let parts: Vec<Partition> = key
        .split('|')
        .map(|p| p.parse::<Partition>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Consistency(format!("bad cache key {key:?}: {e}")))?;
    parts
        .try_into()
        .map_err(|_| CliError::Consistency(format!("cache key {key:?} does not have {N} parts")))
}

impl CacheFile {
    /// Snapshot of the process-wide caches.
    pub fn from_globals() -> Self {
        let character_entries = CharacterCache::global()
            .entries()
            .into_iter()
            .map(|e| (format!("{}|{}", e.lambda, e.cycle_type.cycles()), e.value.to_string()))
            .collect();
        let kron_entries = KronCache::global()
            .entries()
            .into_iter()
            .map(|t| (format!("{}|{}|{}", t.mu, t.nu, t.lambda), t.g))
            .collect();
        Self {
            version: CACHE_VERSION,
            character_entries,
            kron_entries,
        }
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let file: CacheFile =
            serde_json::from_str(&text).map_err(|e| CliError::Consistency(format!("{}: {e}", path.display())))?;
        if file.version != CACHE_VERSION {
            return Err(CliError::Consistency(format!(
                "{}: cache version {} is not {CACHE_VERSION}",
                path.display(),
                file.version
            )));
        }
        Ok(file)
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string(self).expect("cache serializes");
        crate::output::emit(Some(path), &text)
    }

    /// Recomputes up to `count` random entries of each table without any
    /// cached state and fails on the first disagreement.
    pub fn spot_check(&self, count: usize, seed: u64) -> CliResult<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fresh = CharacterCache::new();
        for (key, value) in self.character_entries.iter().choose_multiple(&mut rng, count.min(self.character_entries.len())) {
            let [lambda, cycles] = parse_key::<2>(key)?;
            let stored: BigInt = value
                .parse()
                .map_err(|_| CliError::Consistency(format!("bad character value {value:?} for {key}")))?;
            let computed = fresh.character(&lambda, &cycles)?;
            if computed != stored {
                return Err(CliError::Consistency(format!(
                    "cached character {key} = {stored}, recomputed {computed}"
                )));
            }
        }
        for (key, &g) in self.kron_entries.iter().choose_multiple(&mut rng, count.min(self.kron_entries.len())) {
            let [mu, nu, lambda] = parse_key::<3>(key)?;
            let computed = kronecker_coefficient_with(&fresh, &mu, &nu, &lambda)?;
            if computed != g {
                return Err(CliError::Consistency(format!("cached g {key} = {g}, recomputed {computed}")));
            }
        }
        Ok(())
    }

    /// Seeds the process-wide caches.
    pub fn install(&self) -> CliResult<()> {
        let chars = CharacterCache::global();
        for (key, value) in &self.character_entries {
            let [lambda, cycles] = parse_key::<2>(key)?;
            let value: BigInt = value
                .parse()
                .map_err(|_| CliError::Consistency(format!("bad character value {value:?} for {key}")))?;
            chars.insert(lambda, cycles, value);
        }
        let kron = KronCache::global();
        for (key, &g) in &self.kron_entries {
            let [mu, nu, lambda] = parse_key::<3>(key)?;
            kron.insert(&mu, &nu, &lambda, g);
        }
        Ok(())
    }
}

/// An exclusively locked cache path. Dropping it releases the lock.
#[derive(Debug)]
pub struct CacheSession {
    path: PathBuf,
    _lock: File,
}

impl CacheSession {
    /// Locks `<path>.lock`, then loads, checks and installs the cache if it
    /// exists. Returns `Ok(None)` when another process holds the lock.
    pub fn open(path: &Path, seed: u64) -> CliResult<Option<Self>> {
        let lock_path = lock_path(path);
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)
            .map_err(|e| CliError::io(&lock_path, e))?;
        match lock.try_lock() {
            Ok(()) => {}
            Err(TryLockError::WouldBlock) => return Ok(None),
            Err(TryLockError::Error(e)) => return Err(CliError::io(&lock_path, e)),
        }
        if path.exists() {
            let file = CacheFile::read(path)?;
            file.spot_check(SPOT_CHECKS, seed)?;
            file.install()?;
        }
        Ok(Some(Self {
            path: path.to_path_buf(),
            _lock: lock,
        }))
    }

    pub fn save(&self) -> CliResult<()> {
        CacheFile::from_globals().write(&self.path)
    }
}

fn lock_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".lock");
    PathBuf::from(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_check_catches_corruption() {
        let mut file = CacheFile {
            version: CACHE_VERSION,
            ..Default::default()
        };
        file.character_entries.insert("2,1|1,1,1".into(), "2".into());
        file.kron_entries.insert("2,1|2,1|2,1".into(), 1);
        file.spot_check(SPOT_CHECKS, 0).unwrap();
        file.kron_entries.insert("1,1|1,1|1,1".into(), 1);
        assert!(matches!(file.spot_check(SPOT_CHECKS, 0), Err(CliError::Consistency(_))));
    }

    #[test]
    fn rejects_malformed_keys() {
        assert!(parse_key::<3>("2,1|2,1").is_err());
        assert!(parse_key::<2>("1,2|3").is_err());
    }
}
