//! On-disk cache of formal group law data, one JSON file per law and precision.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use eqcob_core::{FglContext, GradedSeries, LawSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::wire::SeriesWire;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FglCacheFile {
    pub law: String,
    pub precision: usize,
    pub series: BTreeMap<String, SeriesWire>,
}

impl FglCacheFile {
    pub fn new(ctx: &FglContext) -> Self {
        FglCacheFile {
            law: ctx.law().to_string(),
            precision: ctx.precision(),
            series: ctx.named_series().into_iter().map(|(k, s)| (k, SeriesWire::from(s))).collect(),
        }
    }

    /// Rebuilds the context, rejecting files whose header does not match or
    /// whose series fail the axiom checks.
    pub fn context(&self, law: LawSpec, precision: usize) -> Result<FglContext, String> {
        if self.law != law.to_string() || self.precision != precision {
            return Err(format!("header is {} at D = {}", self.law, self.precision));
        }
        let get = |name: &str| -> Result<GradedSeries, String> {
            let w = self.series.get(name).ok_or_else(|| format!("missing series {name}"))?;
            GradedSeries::try_from(w).map_err(|e| e.to_string())
        };
        let mut multiples = BTreeMap::new();
        for (name, w) in &self.series {
            if let Some(k) = name.strip_prefix("k_") {
                let k: i64 = k.parse().map_err(|_| format!("bad series name {name}"))?;
                multiples.insert(k, GradedSeries::try_from(w).map_err(|e| e.to_string())?);
            } else if !matches!(name.as_str(), "F" | "iota" | "kappa") {
                return Err(format!("unexpected series {name}"));
            }
        }
        let ctx = FglContext::from_parts(law, precision, get("F")?, get("iota")?, get("kappa")?, multiples)
            .map_err(|e| e.to_string())?;
        let report = ctx.check_axioms().map_err(|e| e.to_string())?;
        if !report.all() {
            return Err("axiom check failed".to_string());
        }
        Ok(ctx)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheStatus {
    Disabled,
    Hit,
    Built,
    Rebuilt(String),
}

#[derive(Debug, Clone)]
pub struct FglCache {
    dir: PathBuf,
}

impl FglCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FglCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(law: LawSpec, precision: usize) -> String {
        let digest = Sha256::digest(format!("{law}|{precision}").as_bytes());
        hex::encode(&digest[..8])
    }

    pub fn path(&self, law: LawSpec, precision: usize) -> PathBuf {
        self.dir.join(format!("fgl-{}.json", Self::key(law, precision)))
    }

    pub fn load_or_build(&self, law: LawSpec, precision: usize) -> Result<(FglContext, CacheStatus), CliError> {
        let path = self.path(law, precision);
        let stale = match fs::read_to_string(&path) {
            Ok(text) => match serde_json::from_str::<FglCacheFile>(&text) {
                Ok(file) => match file.context(law, precision) {
                    Ok(ctx) => return Ok((ctx, CacheStatus::Hit)),
                    Err(reason) => Some(reason),
                },
                Err(e) => Some(e.to_string()),
            },
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
            Err(e) => return Err(e.into()),
        };
        let ctx = FglContext::build(law, precision)?;
        fs::create_dir_all(&self.dir)?;
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string(&FglCacheFile::new(&ctx))?)?;
        fs::rename(&tmp, &path)?;
        let status = match stale {
            Some(reason) => CacheStatus::Rebuilt(reason),
            None => CacheStatus::Built,
        };
        Ok((ctx, status))
    }
}

pub fn context(cache: Option<&FglCache>, law: LawSpec, precision: usize) -> Result<(FglContext, CacheStatus), CliError> {
    match cache {
        Some(c) => c.load_or_build(law, precision),
        None => Ok((FglContext::build(law, precision)?, CacheStatus::Disabled)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_round_trip_and_staleness() {
        let dir = tempfile::tempdir().unwrap();
        let cache = FglCache::new(dir.path());
        let law = LawSpec::Universal { generators: 3 };
        let (a, s) = cache.load_or_build(law, 4).unwrap();
        assert_eq!(s, CacheStatus::Built);
        let (b, s) = cache.load_or_build(law, 4).unwrap();
        assert_eq!(s, CacheStatus::Hit);
        assert_eq!(a.sum_series(), b.sum_series());
        assert_eq!(a.cached_multiples(), b.cached_multiples());

        // A file for another precision placed under this key is not trusted.
        let other = FglCacheFile::new(&FglContext::build(law, 3).unwrap());
        fs::write(cache.path(law, 4), serde_json::to_string(&other).unwrap()).unwrap();
        let (c, s) = cache.load_or_build(law, 4).unwrap();
        assert!(matches!(s, CacheStatus::Rebuilt(_)));
        assert_eq!(c.kappa_series(), a.kappa_series());

        // Tampered coefficients fail validation.
        let mut file = FglCacheFile::new(&a);
        file.series.get_mut("F").unwrap().terms[0].c = "2".to_string();
        fs::write(cache.path(law, 4), serde_json::to_string(&file).unwrap()).unwrap();
        assert!(matches!(cache.load_or_build(law, 4).unwrap().1, CacheStatus::Rebuilt(_)));

        fs::write(cache.path(law, 4), "not json").unwrap();
        assert!(matches!(cache.load_or_build(law, 4).unwrap().1, CacheStatus::Rebuilt(_)));
    }

    #[test]
    fn keys_differ_by_precision_and_law() {
        let a = FglCache::key(LawSpec::Additive, 5);
        assert_ne!(a, FglCache::key(LawSpec::Additive, 6));
        assert_ne!(a, FglCache::key(LawSpec::Multiplicative { beta: 1 }, 5));
        assert_eq!(a.len(), 16);
    }
}
