use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum WordListError {
    #[error("cannot read word list {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("word list parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("duplicate abbreviation `{0}`")]
    DuplicateAbbreviation(String),
}

fn read(path: &Path) -> Result<String, WordListError> {
    fs::read_to_string(path).map_err(|source| WordListError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

/// Set of lowercase stop words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopWords {
    words: HashSet<String>,
}

impl StopWords {
    pub fn parse(text: &str) -> Result<Self, WordListError> {
        let mut words = HashSet::new();
        for (line, raw) in content_lines(text) {
            let word = raw.trim();
            if word.chars().any(char::is_whitespace) {
                return Err(WordListError::Parse {
                    line,
                    reason: format!("stop word `{word}` contains whitespace"),
                });
            }
            words.insert(word.to_lowercase());
        }
        Ok(Self { words })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, WordListError> {
        Self::parse(&read(path.as_ref())?)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

impl<S: AsRef<str>> FromIterator<S> for StopWords {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self {
            words: iter
                .into_iter()
                .map(|w| w.as_ref().trim().to_lowercase())
                .collect(),
        }
    }
}

/// Case-insensitive abbreviation → expansion table (`FB` → `facebook`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Abbreviations {
    // keyed by lowercase abbreviation
    table: HashMap<String, String>,
}

impl Abbreviations {
    pub fn parse(text: &str) -> Result<Self, WordListError> {
        let mut out = Self::default();
        for (line, raw) in content_lines(text) {
            let (abbr, expansion) = raw.split_once('\t').ok_or_else(|| WordListError::Parse {
                line,
                reason: "expected `ABBR<TAB>expansion`".to_owned(),
            })?;
            out.insert(abbr, expansion).map_err(|e| match e {
                WordListError::Parse { reason, .. } => WordListError::Parse { line, reason },
                other => other,
            })?;
        }
        Ok(out)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, WordListError> {
        Self::parse(&read(path.as_ref())?)
    }

    pub fn insert(&mut self, abbr: &str, expansion: &str) -> Result<(), WordListError> {
        let key = abbr.trim();
        if key.is_empty() || key.chars().any(char::is_whitespace) {
            return Err(WordListError::Parse {
                line: 0,
                reason: format!("invalid abbreviation `{key}`"),
            });
        }
        let expansion = expansion.trim();
        if expansion.is_empty() {
            return Err(WordListError::Parse {
                line: 0,
                reason: format!("empty expansion for `{key}`"),
            });
        }
        let key = key.to_lowercase();
        if self.table.contains_key(&key) {
            return Err(WordListError::DuplicateAbbreviation(abbr.trim().to_owned()));
        }
        self.table.insert(key, expansion.to_owned());
        Ok(())
    }

    /// Expansion for a word, matched case-insensitively.
    pub fn expand(&self, word: &str) -> Option<&str> {
        self.table.get(&word.to_lowercase()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// `(lowercase abbreviation, expansion)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.table.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}
