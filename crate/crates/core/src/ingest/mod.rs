//! Tweet ingestion: the v1.1 search API client and offline corpus files.

mod client;
mod corpus;
pub mod mock;
pub mod oauth;

use std::fmt;
use std::time::Duration;

use thiserror::Error;

pub use client::{connect, Session, DEFAULT_ENDPOINT, PAGE_SIZE, SEARCH_PATH, VERIFY_PATH};
pub use corpus::{read_corpus, write_corpus, CorpusError};

pub const ENV_CONSUMER_KEY: &str = "TWITTER_CONSUMER_KEY";
pub const ENV_CONSUMER_SECRET: &str = "TWITTER_CONSUMER_SECRET";
pub const ENV_ACCESS_TOKEN: &str = "TWITTER_ACCESS_TOKEN";
pub const ENV_ACCESS_TOKEN_SECRET: &str = "TWITTER_ACCESS_TOKEN_SECRET";

pub const DEFAULT_QUERY: &str = "politics";
pub const DEFAULT_COUNT: u32 = 300;
pub const MAX_COUNT: u32 = 10_000;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("missing credential: environment variable {0} is not set")]
    MissingCredential(&'static str),
    #[error("credential {0} is empty")]
    EmptyCredential(&'static str),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("invalid endpoint `{0}`")]
    InvalidEndpoint(String),
    #[error("authentication failed (HTTP 401)")]
    AuthFailed,
    #[error("endpoint unreachable: {0}")]
    EndpointUnreachable(String),
    #[error("rate limited; retries exhausted{}", .retry_after.map(|d| format!(", retry after {}s", d.as_secs())).unwrap_or_default())]
    RateLimited { retry_after: Option<Duration> },
    #[error("transport error: {0}")]
    Transport(String),
    #[error("malformed response: {0}")]
    MalformedResponse(String),
}

/// A secret string whose `Debug` output is redacted.
#[derive(Clone, PartialEq, Eq)]
struct Secret(String);

impl fmt::Debug for Secret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[redacted]")
    }
}

/// OAuth 1.0a key set. Never printed: `Debug` redacts every field.
#[derive(Clone, PartialEq, Eq)]
pub struct Credentials {
    consumer_key: Secret,
    consumer_secret: Secret,
    access_token: Secret,
    access_token_secret: Secret,
}

impl fmt::Debug for Credentials {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Credentials").finish_non_exhaustive()
    }
}

impl Credentials {
    pub fn new(
        consumer_key: impl Into<String>,
        consumer_secret: impl Into<String>,
        access_token: impl Into<String>,
        access_token_secret: impl Into<String>,
    ) -> Result<Self, IngestError> {
        let check = |name: &'static str, v: String| {
            if v.trim().is_empty() {
                Err(IngestError::EmptyCredential(name))
            } else {
                Ok(Secret(v))
            }
        };
        Ok(Self {
            consumer_key: check(ENV_CONSUMER_KEY, consumer_key.into())?,
            consumer_secret: check(ENV_CONSUMER_SECRET, consumer_secret.into())?,
            access_token: check(ENV_ACCESS_TOKEN, access_token.into())?,
            access_token_secret: check(ENV_ACCESS_TOKEN_SECRET, access_token_secret.into())?,
        })
    }

    /// Reads the four `TWITTER_*` variables through `lookup`.
    pub fn from_env(lookup: impl Fn(&str) -> Option<String>) -> Result<Self, IngestError> {
        let get = |name: &'static str| lookup(name).ok_or(IngestError::MissingCredential(name));
        Self::new(
            get(ENV_CONSUMER_KEY)?,
            get(ENV_CONSUMER_SECRET)?,
            get(ENV_ACCESS_TOKEN)?,
            get(ENV_ACCESS_TOKEN_SECRET)?,
        )
    }

    pub fn consumer_key(&self) -> &str {
        &self.consumer_key.0
    }

    pub fn consumer_secret(&self) -> &str {
        &self.consumer_secret.0
    }

    pub fn access_token(&self) -> &str {
        &self.access_token.0
    }

    pub fn access_token_secret(&self) -> &str {
        &self.access_token_secret.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    text: String,
    count: u32,
}

impl Query {
    pub fn new(text: impl Into<String>, count: u32) -> Result<Self, IngestError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(IngestError::InvalidQuery("query text is empty".to_owned()));
        }
        if !(1..=MAX_COUNT).contains(&count) {
            return Err(IngestError::InvalidQuery(format!(
                "count must be within 1..={MAX_COUNT}, got {count}"
            )));
        }
        Ok(Self { text, count })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn count(&self) -> u32 {
        self.count
    }
}

/// Exponential backoff on HTTP 429. The retry budget is shared by all
/// requests of one logical call (one `connect` or one `fetch_tweets`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub initial_backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_retries: 3,
            initial_backoff: Duration::from_secs(1),
        }
    }
}

impl RetryPolicy {
    /// Delay before retry number `retry` (0-based): 1s, 2s, 4s, ...
    pub fn delay(&self, retry: u32) -> Duration {
        self.initial_backoff.saturating_mul(1u32 << retry.min(16))
    }
}
