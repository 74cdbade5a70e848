//! Dictionary download with an on-disk fallback cache.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime};

use sha2::{Digest, Sha256};
use thiserror::Error;
use url::Url;

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("lexicon source {source_locator} is unreachable ({reason}) and no cached copy exists")]
    SourceUnreachableNoCache {
        source_locator: String,
        reason: String,
    },
    #[error("cannot write lexicon cache {path}: {source}")]
    CacheWriteFailed {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Where a dictionary comes from: an HTTP(S) URL or a local file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceLocator {
    Http(Url),
    File(PathBuf),
}

impl SourceLocator {
    pub fn parse(raw: &str) -> Self {
        if raw.starts_with("http://") || raw.starts_with("https://") {
            if let Ok(url) = Url::parse(raw) {
                return Self::Http(url);
            }
        }
        if let Some(rest) = raw.strip_prefix("file://") {
            let path = Url::parse(raw)
                .ok()
                .and_then(|u| u.to_file_path().ok())
                .unwrap_or_else(|| PathBuf::from(rest));
            return Self::File(path);
        }
        Self::File(PathBuf::from(raw))
    }

    pub fn is_remote(&self) -> bool {
        matches!(self, Self::Http(_))
    }

    fn fetch(&self, timeout: Duration) -> Result<Vec<u8>, String> {
        match self {
            Self::File(path) => fs::read(path).map_err(|e| e.to_string()),
            Self::Http(url) => {
                let agent: ureq::Agent = ureq::Agent::config_builder()
                    .timeout_global(Some(timeout))
                    .http_status_as_error(false)
                    .build()
                    .into();
                let mut resp = agent.get(url.as_str()).call().map_err(|e| e.to_string())?;
                let status = resp.status().as_u16();
                if !(200..300).contains(&status) {
                    return Err(format!("HTTP {status}"));
                }
                resp.body_mut().read_to_vec().map_err(|e| e.to_string())
            }
        }
    }
}

impl fmt::Display for SourceLocator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Http(url) => write!(f, "{url}"),
            Self::File(path) => write!(f, "{}", path.display()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CacheOptions {
    /// Cached copies older than this are still served, with a warning.
    pub max_age: Option<Duration>,
    pub timeout: Duration,
}

impl Default for CacheOptions {
    fn default() -> Self {
        Self {
            max_age: None,
            timeout: Duration::from_secs(30),
        }
    }
}

/// Result of [`fetch_and_cache`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CachedFile {
    pub path: PathBuf,
    /// The source could not be reached and an older cached copy was returned.
    pub stale: bool,
    /// Age of the cached copy when it was served stale.
    pub age: Option<Duration>,
    /// The stale copy is older than [`CacheOptions::max_age`].
    pub expired: bool,
}

/// Cache file used for `source` inside `cache_dir`.
pub fn cache_path(source: &SourceLocator, cache_dir: &Path) -> PathBuf {
    let digest = Sha256::digest(source.to_string().as_bytes());
    cache_dir.join(format!("lexicon-{}.tsv", &hex::encode(digest)[..16]))
}

/// Downloads the dictionary at `source` into `cache_dir`.
///
/// A fresh download replaces the cached file via rename, so concurrent
/// callers never observe a partial file. When the source is unreachable the
/// existing cached copy is returned and flagged stale.
pub fn fetch_and_cache(
    source: &SourceLocator,
    cache_dir: &Path,
    opts: &CacheOptions,
) -> Result<CachedFile, FetchError> {
    let target = cache_path(source, cache_dir);
    match source.fetch(opts.timeout) {
        Ok(bytes) => {
            write_atomically(cache_dir, &target, &bytes)?;
            Ok(CachedFile {
                path: target,
                stale: false,
                age: None,
                expired: false,
            })
        }
        Err(reason) => {
            let Ok(meta) = fs::metadata(&target) else {
                return Err(FetchError::SourceUnreachableNoCache {
                    source_locator: source.to_string(),
                    reason,
                });
            };
            let age = meta
                .modified()
                .ok()
                .and_then(|m| SystemTime::now().duration_since(m).ok());
            let expired = matches!((opts.max_age, age), (Some(max), Some(age)) if age > max);
            log::warn!(
                "lexicon source {source} unreachable ({reason}); using cached copy {}",
                target.display()
            );
            if expired {
                log::warn!(
                    "cached lexicon {} is older than the configured max age",
                    target.display()
                );
            }
            Ok(CachedFile {
                path: target,
                stale: true,
                age,
                expired,
            })
        }
    }
}

fn write_atomically(dir: &Path, target: &Path, bytes: &[u8]) -> Result<(), FetchError> {
    let fail = |source| FetchError::CacheWriteFailed {
        path: target.to_path_buf(),
        source,
    };
    fs::create_dir_all(dir).map_err(fail)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(target).map_err(|e| fail(e.error))?;
    Ok(())
}
