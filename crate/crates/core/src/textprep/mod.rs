//! Tweet validation, tokenization and cleaning.

mod clean;
mod tokenize;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use clean::{clean, clean_text, CleanTokens};
pub use tokenize::{tokenize, Span, Token, TokenKind, Tokenizer};

/// Character limit per tweet since late 2017.
pub const MAX_TWEET_CHARS: usize = 280;

/// One tweet as fetched from the API or read from a corpus file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTweet {
    pub id: String,
    pub text: String,
    pub created_at: DateTime<Utc>,
    pub author: String,
    #[serde(default)]
    pub is_retweet: bool,
    #[serde(default)]
    pub lang: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TweetError {
    #[error("tweet has no id")]
    MissingId,
    #[error("tweet text is empty")]
    EmptyText,
    #[error("tweet text is {0} characters, limit is {MAX_TWEET_CHARS}")]
    OverLength(usize),
    #[error("duplicate tweet id `{0}` in batch")]
    DuplicateId(String),
}

/// Passes through tweets that satisfy the [`RawTweet`] invariants.
pub fn validate_tweet(raw: RawTweet) -> Result<RawTweet, TweetError> {
    if raw.id.trim().is_empty() {
        return Err(TweetError::MissingId);
    }
    if raw.text.trim().is_empty() {
        return Err(TweetError::EmptyText);
    }
    let len = raw.text.chars().count();
    if len > MAX_TWEET_CHARS {
        return Err(TweetError::OverLength(len));
    }
    Ok(raw)
}
