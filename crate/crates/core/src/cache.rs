//! On-disk cache of enumerated Grassmannian point sets, keyed by `(n, k, q)`.
//!
//! Files are JSON with a SHA-256 over the point list; a file whose checksum
//! or contents fail validation is treated as a miss.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::grassmann::{Delta, GrassCtx};

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "OGC_CACHE";

#[derive(Serialize, Deserialize)]
struct Entry {
    schema: u32,
    n: usize,
    k: usize,
    q: u32,
    count: usize,
    sha256: String,
    points: Vec<Vec<u16>>,
}

/// Hex SHA-256 of the point matrices in their canonical JSON form.
pub fn checksum(points: &[Vec<u16>]) -> String {
    let bytes = serde_json::to_vec(points).expect("u16 matrices serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn at(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    /// `$OGC_CACHE`, else `ogc-cache` under the system temp directory.
    pub fn from_env() -> Cache {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Cache::at(d),
            _ => Cache::at(std::env::temp_dir().join("ogc-cache")),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, ctx: &GrassCtx) -> PathBuf {
        self.dir.join(format!("delta_n{}_k{}_q{}.json", ctx.n(), ctx.k(), ctx.field().q()))
    }

    fn read(&self, ctx: &GrassCtx) -> Option<Entry> {
        let text = fs::read(self.path(ctx)).ok()?;
        let e: Entry = serde_json::from_slice(&text).ok()?;
        let key_ok = e.schema == 1 && e.n == ctx.n() && e.k == ctx.k() && e.q == ctx.field().q();
        (key_ok && e.count == e.points.len() && checksum(&e.points) == e.sha256).then_some(e)
    }

    /// Stored checksum, if a valid entry exists.
    pub fn stored_checksum(&self, ctx: &GrassCtx) -> Option<String> {
        self.read(ctx).map(|e| e.sha256)
    }

    pub fn load(&self, ctx: &GrassCtx) -> Option<Delta> {
        let e = self.read(ctx)?;
        Delta::from_point_matrices(ctx.clone(), &e.points).ok()
    }

    /// Writes atomically (temp file, then rename).
    pub fn store(&self, delta: &Delta) -> Result<PathBuf> {
        let ctx = delta.ctx();
        fs::create_dir_all(&self.dir)?;
        let points = delta.point_matrices();
        let entry = Entry {
            schema: 1,
            n: ctx.n(),
            k: ctx.k(),
            q: ctx.field().q(),
            count: points.len(),
            sha256: checksum(&points),
            points,
        };
        let path = self.path(ctx);
        let tmp = path.with_extension(format!("json.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&entry)?)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}

/// How a point set was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Cache,
    Fresh,
    /// Enumerated with the cache bypassed; `Some(eq)` compares against a
    /// stored entry when one exists.
    Bypassed(Option<bool>),
}

/// Loads Δ_k from the cache or enumerates and stores it. With `bypass`, the
/// set is always enumerated and only compared with the stored checksum.
pub fn delta(ctx: &GrassCtx, cap: usize, cache: &Cache, bypass: bool) -> Result<(Delta, Origin)> {
    if bypass {
        let d = Delta::enumerate(ctx, cap)?;
        let same = cache.stored_checksum(ctx).map(|s| s == checksum(&d.point_matrices()));
        return Ok((d, Origin::Bypassed(same)));
    }
    if let Some(d) = cache.load(ctx) {
        return Ok((d, Origin::Cache));
    }
    let d = Delta::enumerate(ctx, cap)?;
    // a read-only cache directory only costs the speedup
    let _ = cache.store(&d);
    Ok((d, Origin::Fresh))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::DEFAULT_CAP;

    #[test]
    fn round_trip_and_bypass() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let ctx = GrassCtx::from_order(2, 2, 3).unwrap();
        let (a, o) = delta(&ctx, DEFAULT_CAP, &cache, false).unwrap();
        assert_eq!(o, Origin::Fresh);
        let (b, o) = delta(&ctx, DEFAULT_CAP, &cache, false).unwrap();
        assert_eq!(o, Origin::Cache);
        assert_eq!(a.points(), b.points());
        let (_, o) = delta(&ctx, DEFAULT_CAP, &cache, true).unwrap();
        assert_eq!(o, Origin::Bypassed(Some(true)));
    }

    #[test]
    fn tampered_file_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let ctx = GrassCtx::from_order(2, 1, 2).unwrap();
        let (d, _) = delta(&ctx, DEFAULT_CAP, &cache, false).unwrap();
        let path = cache.path(&ctx);
        let mut e: Entry = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
        e.points.swap(0, 1);
        fs::write(&path, serde_json::to_vec(&e).unwrap()).unwrap();
        assert!(cache.load(&ctx).is_none());
        assert_eq!(delta(&ctx, DEFAULT_CAP, &cache, true).unwrap().1, Origin::Bypassed(None));
        let (again, o) = delta(&ctx, DEFAULT_CAP, &cache, false).unwrap();
        assert_eq!(o, Origin::Fresh);
        assert_eq!(again.points(), d.points());
    }

    #[test]
    fn checksum_is_stable() {
        assert_eq!(checksum(&[vec![1, 0], vec![0, 1]]), checksum(&[vec![1, 0], vec![0, 1]]));
        assert_ne!(checksum(&[vec![1, 0]]), checksum(&[vec![0, 1]]));
    }
}
