//! Line-delimited JSON tweet corpora.
//!
//! One object per line with fields `id`, `text`, `created_at` (RFC 3339),
//! `author`, `is_retweet` and `lang`. Newlines inside text are escaped by
//! the JSON encoding, so every record stays on one line.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::textprep::RawTweet;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("duplicate tweet id `{0}` in corpus")]
    DuplicateId(String),
}

pub fn read_corpus(path: impl AsRef<Path>) -> Result<Vec<RawTweet>, CorpusError> {
    let path = path.as_ref();
    let io_err = |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    };
    let reader = BufReader::new(File::open(path).map_err(io_err)?);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        let tweet: RawTweet = serde_json::from_str(&line).map_err(|e| CorpusError::Parse {
            line: line_no,
            reason: e.to_string(),
        })?;
        if tweet.id.trim().is_empty() {
            return Err(CorpusError::Parse {
                line: line_no,
                reason: "empty id".to_owned(),
            });
        }
        if !seen.insert(tweet.id.clone()) {
            return Err(CorpusError::DuplicateId(tweet.id));
        }
        out.push(tweet);
    }
    Ok(out)
}

pub fn write_corpus(tweets: &[RawTweet], path: impl AsRef<Path>) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let io_err = |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
    for tweet in tweets {
        serde_json::to_writer(&mut w, tweet).map_err(|e| io_err(e.into()))?;
        w.write_all(b"\n").map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}
