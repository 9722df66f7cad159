//! Bundled fixtures and the on-disk cache.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::catalog::{check, Fixture};
use crate::error::{Error, Result};

/// Seed recorded in the bundled repaired fixtures.
pub const REPAIR_SEED: u64 = 1729;

macro_rules! transcribed {
    ($name:literal) => {
        (
            $name,
            include_str!(concat!("../../fixtures/bundled/", $name, ".fix")),
        )
    };
}

macro_rules! repaired {
    ($name:literal) => {
        (
            $name,
            include_str!(concat!("../../fixtures/repaired/", $name, ".fix")),
        )
    };
}

const TRANSCRIBED: &[(&str, &str)] = &[
    transcribed!("covering-10"),
    transcribed!("covering-11"),
    transcribed!("covering-12"),
    transcribed!("covering-14"),
    transcribed!("covering-16"),
    transcribed!("covering-20"),
    transcribed!("covering-4"),
    transcribed!("covering-5"),
    transcribed!("covering-6"),
    transcribed!("covering-8"),
    transcribed!("gdd3-1^12-3^1"),
    transcribed!("gdd3-1^6-3^1"),
    transcribed!("gdd3-2^3"),
    transcribed!("gdd3-2^3-4^1"),
    transcribed!("gdd3-2^4"),
    transcribed!("gdd3-2^6"),
    transcribed!("gdd3-3^3"),
    transcribed!("gdd3-5^3"),
    transcribed!("gdd4-3^12"),
    transcribed!("gdd4-3^4"),
    transcribed!("gdd4-3^5"),
    transcribed!("gdd4-3^8"),
    transcribed!("gdd4-3^9"),
    transcribed!("gdd47-3^10-12^1"),
    transcribed!("gdd47-3^5-6^1"),
    transcribed!("gdd47-3^6-6^1"),
    transcribed!("sts-13"),
    transcribed!("sts-15"),
    transcribed!("sts-3"),
    transcribed!("sts-7"),
    transcribed!("sts-9"),
];

const REPAIRED: &[(&str, &str)] = &[
    repaired!("covering-10"),
    repaired!("covering-11"),
    repaired!("covering-12"),
    repaired!("covering-14"),
    repaired!("covering-20"),
];

/// Keys of all bundled fixtures as transcribed.
pub fn bundled_keys() -> Vec<&'static str> {
    TRANSCRIBED.iter().map(|(k, _)| *k).collect()
}

/// The bundled fixture for `key`: the repaired version when one ships,
/// otherwise the transcription. With `raw` set, always the transcription.
pub fn bundled(key: &str, raw: bool) -> Option<Fixture> {
    let repaired = (!raw)
        .then(|| REPAIRED.iter().find(|(k, _)| *k == key))
        .flatten();
    let (_, text) = repaired.or_else(|| TRANSCRIBED.iter().find(|(k, _)| *k == key))?;
    Some(Fixture::load(text).expect("bundled fixtures parse"))
}

/// Looks `key` up in the bundled catalog, then in `cache`, and re-verifies
/// whatever it finds.
pub fn get(key: &str, cache: Option<&Cache>) -> Result<Fixture> {
    let found = match bundled(key, false) {
        Some(f) => Some(f),
        None => match cache {
            Some(c) => c.load(key)?,
            None => None,
        },
    };
    let f = found.ok_or_else(|| Error::NotAvailable(format!("no fixture {key}")))?;
    let report = check(&f);
    if !report.is_valid() {
        return Err(Error::Unverified {
            what: key.to_string(),
            report: Box::new(report),
        });
    }
    Ok(f)
}

/// A directory of fixture files, one per key.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// The directory named by `UCOVER_CACHE_DIR`, default `./.ucover-cache`.
    pub fn from_env() -> Self {
        let dir = std::env::var_os("UCOVER_CACHE_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(".ucover-cache"));
        Cache::new(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.fix"))
    }

    pub fn load(&self, key: &str) -> Result<Option<Fixture>> {
        let path = self.path(key);
        match fs::read_to_string(&path) {
            Ok(text) => Fixture::load(&text).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::io(path, e)),
        }
    }

    /// Writes `f` under its key while holding the directory lock.
    pub fn store(&self, f: &Fixture) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let lock_path = self.dir.join(".lock");
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)
            .map_err(|e| Error::io(&lock_path, e))?;
        lock.lock().map_err(|e| Error::io(&lock_path, e))?;
        let path = self.path(&f.key());
        let tmp = path.with_extension("fix.tmp");
        let written = File::create(&tmp)
            .and_then(|mut file| file.write_all(f.to_text().as_bytes()))
            .and_then(|_| fs::rename(&tmp, &path));
        lock.unlock().map_err(|e| Error::io(&lock_path, e))?;
        written.map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    /// Keys of all cached fixtures, sorted.
    pub fn keys(&self) -> Result<Vec<String>> {
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(Error::io(&self.dir, e)),
        };
        let mut keys: Vec<String> = entries
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                e.file_name()
                    .to_str()?
                    .strip_suffix(".fix")
                    .map(str::to_string)
            })
            .collect();
        keys.sort();
        Ok(keys)
    }
}
