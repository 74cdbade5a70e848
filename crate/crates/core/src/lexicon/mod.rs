//! Sentiment dictionary and auxiliary word lists.
//!
//! A lexicon file is UTF-8 text with one `term<TAB>valence` pair per line.
//! Lines starting with `#` are comments and blank lines are skipped. A
//! comment of the form `# version: <label>` names the lexicon version; when
//! absent the version is derived from a hash of the file contents.

mod cache;
mod wordlist;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

pub use cache::{cache_path, fetch_and_cache, CacheOptions, CachedFile, FetchError, SourceLocator};
pub use wordlist::{Abbreviations, StopWords, WordListError};

const VERSION_PREFIX: &str = "version:";

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("duplicate lexicon term `{0}`")]
    DuplicateTerm(String),
    #[error("valence of `{0}` must be nonzero and within [-1, 1]")]
    ValenceOutOfRange(String),
}

/// One validated dictionary entry.
#[derive(Debug, Clone, PartialEq)]
pub struct LexiconEntry {
    pub term: String,
    pub valence: f64,
}

impl LexiconEntry {
    /// Normalizes `term` (trim + lowercase) and checks both fields.
    pub fn new(term: &str, valence: f64) -> Result<Self, LexiconError> {
        let term =
            normalize_term(term).map_err(|reason| LexiconError::Parse { line: 0, reason })?;
        if !valence.is_finite() || valence == 0.0 || !(-1.0..=1.0).contains(&valence) {
            return Err(LexiconError::ValenceOutOfRange(term));
        }
        Ok(Self { term, valence })
    }
}

fn normalize_term(raw: &str) -> Result<String, String> {
    let term = raw.trim();
    if term.is_empty() {
        return Err("empty term".to_owned());
    }
    if term.chars().any(char::is_whitespace) {
        return Err(format!("term `{term}` contains whitespace"));
    }
    Ok(term.to_lowercase())
}

/// Immutable term → valence map.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    entries: BTreeMap<String, f64>,
    version: String,
    positive_count: usize,
    negative_count: usize,
}

impl Lexicon {
    /// Builds a lexicon from already-validated entries, rejecting duplicates.
    pub fn from_entries<I>(entries: I, version: impl Into<String>) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = LexiconEntry>,
    {
        let mut map = BTreeMap::new();
        for entry in entries {
            if map.insert(entry.term.clone(), entry.valence).is_some() {
                return Err(LexiconError::DuplicateTerm(entry.term));
            }
        }
        let positive_count = map.values().filter(|v| **v > 0.0).count();
        Ok(Self {
            negative_count: map.len() - positive_count,
            positive_count,
            entries: map,
            version: version.into(),
        })
    }

    /// Parses lexicon file contents.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut version = None;
        let mut entries = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if let Some(comment) = line.trim_start().strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix(VERSION_PREFIX) {
                    version.get_or_insert_with(|| v.trim().to_owned());
                }
                continue;
            }
            let (term, valence) = line.split_once('\t').ok_or_else(|| LexiconError::Parse {
                line: line_no,
                reason: "expected `term<TAB>valence`".to_owned(),
            })?;
            let term = normalize_term(term).map_err(|reason| LexiconError::Parse {
                line: line_no,
                reason,
            })?;
            let valence: f64 = valence.trim().parse().map_err(|_| LexiconError::Parse {
                line: line_no,
                reason: format!("invalid valence `{}`", valence.trim()),
            })?;
            entries.push(LexiconEntry::new(&term, valence)?);
        }
        let version = version.unwrap_or_else(|| content_version(text));
        Self::from_entries(entries, version)
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn positive_count(&self) -> usize {
        self.positive_count
    }

    pub fn negative_count(&self) -> usize {
        self.negative_count
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Valence of a normalized (lowercase) token, if the dictionary knows it.
    pub fn lookup(&self, token: &str) -> Option<f64> {
        self.entries.get(token).copied()
    }

    /// Entries in term order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, f64)> + '_ {
        self.entries.iter().map(|(t, v)| (t.as_str(), *v))
    }

    /// Writes the lexicon back in the file format accepted by [`Lexicon::parse`].
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# {VERSION_PREFIX} {}\n", self.version);
        for (term, valence) in &self.entries {
            let _ = writeln!(out, "{term}\t{valence}");
        }
        out
    }
}

fn content_version(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    format!("sha256:{}", &hex::encode(digest)[..12])
}

/// Reads and validates a lexicon file.
pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Lexicon::parse(&text)
}
