use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use parking_lot::RwLock;

use super::basis::{build_mk_basis, build_sk_basis, SpaceBasis};
use super::io::{fixture_name, ingest_basis};
use crate::error::{Error, Result};

/// Environment variable overriding the fixture directory.
pub const DATA_DIR_ENV: &str = "MFCHECK_DATA_DIR";

/// Fixture directory: `$MFCHECK_DATA_DIR` if set, else the bundled `data/`.
pub fn default_data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data")))
}

type Key = (u32, u64, bool);

/// Thread-safe source of space bases: generates when the generator span is
/// complete and falls back to fixture files otherwise.
pub struct SpaceStore {
    data_dir: PathBuf,
    cache: RwLock<HashMap<Key, Arc<SpaceBasis>>>,
    failed: RwLock<HashSet<Key>>,
}

impl SpaceStore {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        SpaceStore {
            data_dir: data_dir.into(),
            cache: RwLock::new(HashMap::new()),
            failed: RwLock::new(HashSet::new()),
        }
    }

    pub fn data_dir(&self) -> &Path {
        &self.data_dir
    }

    pub fn cusp_space(&self, k: u32, n: u64, prec: usize) -> Result<Arc<SpaceBasis>> {
        self.space(k, n, true, prec)
    }

    pub fn full_space(&self, k: u32, n: u64, prec: usize) -> Result<Arc<SpaceBasis>> {
        self.space(k, n, false, prec)
    }

    /// Whether the generator span is known to fall short at `(k, N)`.
    pub fn generation_failed(&self, k: u32, n: u64, cuspidal: bool) -> bool {
        self.failed.read().contains(&(k, n, cuspidal))
    }

    /// Largest precision a basis can be supplied at without regeneration,
    /// if it comes from a fixture.
    pub fn fixture_prec(&self, k: u32, n: u64, cuspidal: bool) -> Option<usize> {
        let key = (k, n, cuspidal);
        if !self.failed.read().contains(&key) {
            return None;
        }
        self.cache.read().get(&key).map(|b| b.prec())
    }

    pub fn space(&self, k: u32, n: u64, cuspidal: bool, prec: usize) -> Result<Arc<SpaceBasis>> {
        let key = (k, n, cuspidal);
        if let Some(b) = self.cache.read().get(&key) {
            if b.prec() >= prec {
                return Ok(if b.prec() == prec {
                    Arc::clone(b)
                } else {
                    Arc::new(b.truncate(prec)?)
                });
            }
        }
        if !self.failed.read().contains(&key) {
            let built = if cuspidal {
                build_sk_basis(k, n, prec)
            } else {
                build_mk_basis(k, n, prec)
            };
            match built {
                Ok(b) => {
                    let b = Arc::new(b);
                    self.cache.write().insert(key, Arc::clone(&b));
                    return Ok(b);
                }
                Err(Error::BasisIncomplete { .. }) | Err(Error::CuspFilterInconsistent { .. }) => {
                    self.failed.write().insert(key);
                }
                Err(e) => return Err(e),
            }
        }
        let fixture = match self.cache.read().get(&key) {
            Some(b) => Arc::clone(b),
            None => Arc::new(self.load_fixture(k, n, cuspidal)?),
        };
        self.cache.write().insert(key, Arc::clone(&fixture));
        if fixture.prec() < prec {
            return Err(Error::InsufficientPrecision {
                needed: prec,
                have: fixture.prec(),
            });
        }
        Ok(Arc::new(fixture.truncate(prec)?))
    }

    fn load_fixture(&self, k: u32, n: u64, cuspidal: bool) -> Result<SpaceBasis> {
        let path = self.data_dir.join(fixture_name(k, n, cuspidal));
        if !path.exists() {
            return Err(Error::MissingData {
                k,
                n,
                what: format!("no generated basis and no fixture at {}", path.display()),
            });
        }
        let b = ingest_basis(&path)?;
        if b.weight() != k || b.level() != n || b.is_cuspidal() != cuspidal {
            return Err(Error::Parse(format!(
                "{} describes (k={}, N={}, cuspidal={})",
                path.display(),
                b.weight(),
                b.level(),
                b.is_cuspidal()
            )));
        }
        Ok(b)
    }
}

impl Default for SpaceStore {
    fn default() -> Self {
        SpaceStore::new(default_data_dir())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caches_and_truncates() {
        let store = SpaceStore::new("/nonexistent");
        let a = store.cusp_space(12, 1, 10).unwrap();
        let b = store.cusp_space(12, 1, 5).unwrap();
        assert_eq!(b.basis().row(0), &a.basis().row(0)[..6]);
    }

    #[test]
    fn missing_fixture_is_reported() {
        let store = SpaceStore::new("/nonexistent");
        assert!(matches!(store.cusp_space(2, 11, 10), Err(Error::MissingData { .. })));
        assert!(store.generation_failed(2, 11, true));
    }
}
