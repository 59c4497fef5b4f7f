//! On-disk cache for character expansions, keyed by a hash of the request.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use n4char::JacobiSeries;
use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "N4CHAR_CACHE_DIR";

/// `$N4CHAR_CACHE_DIR`, else `$XDG_CACHE_HOME/n4char`, else `$HOME/.cache/n4char`.
pub fn default_dir() -> Option<PathBuf> {
    let nonempty = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
    nonempty(ENV_VAR)
        .or_else(|| nonempty("XDG_CACHE_HOME").map(|p| p.join("n4char")))
        .or_else(|| nonempty("HOME").map(|p| p.join(".cache").join("n4char")))
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Self { dir }
    }

    /// Key over the request fields and the crate version; fields are joined
    /// with a separator that cannot occur in them.
    pub fn key(fields: &[&str]) -> String {
        let mut h = Sha256::new();
        h.update(format!("n4char {}", env!("CARGO_PKG_VERSION")).as_bytes());
        for f in fields {
            h.update(b"\x1f");
            h.update(f.as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A cached series, or None if absent or unreadable.
    pub fn get(&self, key: &str) -> Option<JacobiSeries> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        JacobiSeries::from_json(&text).ok()
    }

    /// Writes to a temporary file in the cache directory, then renames it into place.
    pub fn put(&self, key: &str, series: &JacobiSeries) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(series.to_json().as_bytes())?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use n4char::rational::{q, qi};
    use n4char::{GaussianRational, QOrder};

    #[test]
    fn round_trip_is_identity_on_json() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("nested"));
        let s = JacobiSeries::from_terms(
            [(q(-1, 8), q(-1, 2), GaussianRational::from_ints(1, 0)), (q(7, 8), q(3, 2), GaussianRational::new(q(1, 3).into_big(), qi(2).into_big()))],
            QOrder::Finite(qi(3)),
        );
        let key = Cache::key(&["a", "b"]);
        assert!(cache.get(&key).is_none());
        cache.put(&key, &s).unwrap();
        let back = cache.get(&key).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), s.to_json());
    }

    #[test]
    fn keys_separate_fields() {
        assert_ne!(Cache::key(&["ab", "c"]), Cache::key(&["a", "bc"]));
        assert_eq!(Cache::key(&["x"]).len(), 64);
    }

    trait IntoBig {
        fn into_big(self) -> num_rational::BigRational;
    }

    impl IntoBig for n4char::Q {
        fn into_big(self) -> num_rational::BigRational {
            n4char::rational::big(self)
        }
    }
}
