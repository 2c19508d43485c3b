//! On-disk amplitude cache: one JSON file per `(curve, g, h)`.
//!
//! Each file is `{"header": <curve serialization>, "amplitude": <tensor>}`.
//! A file is only accepted when its header describes the same curve as the
//! engine loading it.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::curve::{CurveHeader, CurveModel};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::recursion::WAmplitude;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "HURWITZ_TR_CACHE";

#[derive(Serialize, Deserialize)]
#[serde(bound = "F: Field")]
struct CacheFile<F> {
    header: CurveHeader<F>,
    amplitude: WAmplitude<F>,
}

/// A cache directory.
#[derive(Clone, Debug)]
pub struct Store {
    dir: PathBuf,
}

/// One file in the cache, as reported by [`Store::list`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StoreEntry {
    pub file: String,
    pub curve: String,
    pub g: u32,
    pub h: u32,
    pub trunc: i64,
}

impl Store {
    /// Opens (creating if needed) a cache directory and checks it is writable.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let probe = dir.join(".write-probe");
        fs::write(&probe, b"").map_err(|e| Error::Io(format!("{} is not writable: {e}", dir.display())))?;
        let _ = fs::remove_file(probe);
        Ok(Store { dir })
    }

    /// `$HURWITZ_TR_CACHE`, else `$HOME/.cache/hurwitz-tr`, else
    /// `.hurwitz-tr-cache` in the working directory.
    pub fn default_dir() -> PathBuf {
        if let Some(d) = std::env::var_os(CACHE_ENV) {
            return d.into();
        }
        match std::env::var_os("HOME") {
            Some(h) => Path::new(&h).join(".cache").join("hurwitz-tr"),
            None => PathBuf::from(".hurwitz-tr-cache"),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn file_name(curve: &str, g: u32, h: u32) -> String {
        format!("{curve}_g{g}_h{h}.json")
    }

    pub fn load<F: Field>(&self, curve: &CurveModel<F>, g: u32, h: u32) -> Result<Option<WAmplitude<F>>> {
        let path = self.dir.join(Self::file_name(&curve.slug(), g, h));
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let file: CacheFile<F> =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        if !file.header.same_curve(&curve.header()) {
            return Err(Error::CacheMismatch(path.display().to_string()));
        }
        let a = file.amplitude;
        if a.g() != g || a.h() != h || a.curve() != curve.slug() {
            return Err(Error::CacheMismatch(path.display().to_string()));
        }
        Ok(Some(a))
    }

    /// Writes atomically through a temporary file.
    pub fn save<F: Field>(&self, curve: &CurveModel<F>, amp: &WAmplitude<F>) -> Result<()> {
        let name = Self::file_name(amp.curve(), amp.g(), amp.h());
        let file = CacheFile { header: curve.header(), amplitude: amp.clone() };
        let text = serde_json::to_string_pretty(&file)?;
        let tmp = self.dir.join(format!(".{name}.tmp"));
        fs::write(&tmp, text)?;
        fs::rename(&tmp, self.dir.join(name))?;
        Ok(())
    }

    /// Cache files in name order.
    pub fn list(&self) -> Result<Vec<StoreEntry>> {
        let mut out = Vec::new();
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            if path.extension().is_none_or(|e| e != "json") {
                continue;
            }
            let text = fs::read_to_string(&path)?;
            let v: serde_json::Value = serde_json::from_str(&text)?;
            let amp = &v["amplitude"];
            out.push(StoreEntry {
                file: path.file_name().unwrap().to_string_lossy().into_owned(),
                curve: amp["curve"].as_str().unwrap_or_default().to_string(),
                g: amp["g"].as_u64().unwrap_or_default() as u32,
                h: amp["h"].as_u64().unwrap_or_default() as u32,
                trunc: v["header"]["trunc"].as_i64().unwrap_or_default(),
            });
        }
        out.sort_by(|a, b| a.file.cmp(&b.file));
        Ok(out)
    }

    /// Removes every cache file; returns how many were deleted.
    pub fn clear(&self) -> Result<usize> {
        let mut n = 0;
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                fs::remove_file(path)?;
                n += 1;
            }
        }
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::recursion::Engine;

    #[test]
    fn save_load_list_clear() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let mut e = Engine::<Rational>::lambert().unwrap().with_store(store.clone());
        let w = e.w_amplitude(1, 1).unwrap();
        let listed = store.list().unwrap();
        assert_eq!(listed.len(), 1);
        assert_eq!(listed[0].file, "lambert_g1_h1.json");
        let curve = CurveModel::<Rational>::lambert(20).unwrap();
        assert_eq!(store.load(&curve, 1, 1).unwrap().unwrap(), *w);
        assert!(store.load(&curve, 2, 1).unwrap().is_none());
        let other = CurveModel::framed(Rational::from(2), 10).unwrap();
        fs::copy(dir.path().join("lambert_g1_h1.json"), dir.path().join("framed-f2_g1_h1.json")).unwrap();
        assert!(matches!(store.load(&other, 1, 1), Err(Error::CacheMismatch(_))));
        assert_eq!(store.clear().unwrap(), 2);
        assert!(store.list().unwrap().is_empty());
    }
}
