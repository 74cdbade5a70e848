//! Blocking client for the v1.1 `search/tweets` endpoint.

use std::collections::HashSet;
use std::thread;
use std::time::Duration;

use chrono::{DateTime, Utc};
use serde::Deserialize;
use url::Url;

use super::oauth::{self, Signer};
use super::{Credentials, IngestError, Query, RetryPolicy};
use crate::textprep::RawTweet;

pub const DEFAULT_ENDPOINT: &str = "https://api.twitter.com/1.1";
pub const SEARCH_PATH: &str = "/search/tweets.json";
pub const VERIFY_PATH: &str = "/account/verify_credentials.json";
/// Largest `count` the search endpoint serves per page.
pub const PAGE_SIZE: u32 = 100;

const CREATED_AT_FORMAT: &str = "%a %b %d %H:%M:%S %z %Y";

/// Authenticated connection to a search endpoint.
///
/// Pagination is sequential, so a session runs one fetch at a time; use one
/// session per concurrent query.
pub struct Session {
    agent: ureq::Agent,
    base: String,
    signer: Signer,
    policy: RetryPolicy,
}

impl std::fmt::Debug for Session {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Session")
            .field("base", &self.base)
            .field("policy", &self.policy)
            .finish_non_exhaustive()
    }
}

/// Opens a session with the default retry policy and verifies the key set.
pub fn connect(creds: Credentials, endpoint: &str) -> Result<Session, IngestError> {
    Session::connect_with(creds, endpoint, RetryPolicy::default())
}

enum Failure {
    /// no HTTP response at all
    Unreachable(String),
    Api(IngestError),
}

impl Session {
    pub fn connect_with(
        creds: Credentials,
        endpoint: &str,
        policy: RetryPolicy,
    ) -> Result<Session, IngestError> {
        let parsed =
            Url::parse(endpoint).map_err(|_| IngestError::InvalidEndpoint(endpoint.to_owned()))?;
        if !matches!(parsed.scheme(), "http" | "https") {
            return Err(IngestError::InvalidEndpoint(endpoint.to_owned()));
        }
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(Duration::from_secs(30)))
            .build()
            .into();
        let session = Session {
            agent,
            base: endpoint.trim_end_matches('/').to_owned(),
            signer: Signer::new(creds),
            policy,
        };
        let mut retries = 0;
        match session.get(VERIFY_PATH, &[], &mut retries) {
            Ok(_) => Ok(session),
            Err(Failure::Unreachable(reason)) => Err(IngestError::EndpointUnreachable(reason)),
            Err(Failure::Api(e)) => Err(e),
        }
    }

    pub fn endpoint(&self) -> &str {
        &self.base
    }

    /// Consumes the session.
    pub fn close(self) {}

    /// Up to `query.count()` tweets, deduplicated by id, in served order.
    ///
    /// Pages are requested with `max_id` set below the lowest id seen so far.
    /// The fetch stops when the count is reached, a page brings nothing new,
    /// or `ceil(count / PAGE_SIZE)` pages have been read.
    pub fn fetch_tweets(&mut self, query: &Query) -> Result<Vec<RawTweet>, IngestError> {
        let wanted = query.count() as usize;
        let max_pages = query.count().div_ceil(PAGE_SIZE);
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut max_id: Option<u64> = None;
        let mut min_seen: Option<u64> = None;
        let mut retries = 0;
        for _ in 0..max_pages {
            let remaining = (wanted - out.len()).min(PAGE_SIZE as usize);
            let mut params = vec![
                ("q".to_owned(), query.text().to_owned()),
                ("count".to_owned(), remaining.to_string()),
            ];
            if let Some(id) = max_id {
                params.push(("max_id".to_owned(), id.to_string()));
            }
            let body = self
                .get(SEARCH_PATH, &params, &mut retries)
                .map_err(|f| match f {
                    Failure::Unreachable(reason) => IngestError::Transport(reason),
                    Failure::Api(e) => e,
                })?;
            let page: SearchResponse = serde_json::from_str(&body)
                .map_err(|e| IngestError::MalformedResponse(e.to_string()))?;
            let mut added = 0;
            for status in page.statuses {
                let (numeric_id, tweet) = status.into_tweet()?;
                min_seen = Some(min_seen.map_or(numeric_id, |m| m.min(numeric_id)));
                if out.len() < wanted && seen.insert(tweet.id.clone()) {
                    out.push(tweet);
                    added += 1;
                }
            }
            if added == 0 || out.len() >= wanted {
                break;
            }
            max_id = min_seen.map(|m| m.saturating_sub(1));
        }
        Ok(out)
    }

    fn get(
        &self,
        path: &str,
        params: &[(String, String)],
        retries: &mut u32,
    ) -> Result<String, Failure> {
        let mut url = format!("{}{}", self.base, path);
        if !params.is_empty() {
            let qs: Vec<String> = params
                .iter()
                .map(|(k, v)| format!("{}={}", oauth::encode(k), oauth::encode(v)))
                .collect();
            url.push('?');
            url.push_str(&qs.join("&"));
        }
        let parsed = Url::parse(&url)
            .map_err(|_| Failure::Api(IngestError::InvalidEndpoint(self.base.clone())))?;
        loop {
            let auth = self.signer.authorization("GET", &parsed, params);
            let mut resp = self
                .agent
                .get(&url)
                .header("Authorization", &auth)
                .call()
                .map_err(|e| Failure::Unreachable(e.to_string()))?;
            let status = resp.status().as_u16();
            log::debug!("GET {path} -> {status}");
            match status {
                200..=299 => {
                    return resp
                        .body_mut()
                        .read_to_string()
                        .map_err(|e| Failure::Api(IngestError::Transport(e.to_string())));
                }
                401 => return Err(Failure::Api(IngestError::AuthFailed)),
                429 => {
                    let retry_after = resp
                        .headers()
                        .get("retry-after")
                        .and_then(|v| v.to_str().ok())
                        .and_then(|v| v.trim().parse::<u64>().ok())
                        .map(Duration::from_secs);
                    if *retries >= self.policy.max_retries {
                        return Err(Failure::Api(IngestError::RateLimited { retry_after }));
                    }
                    let delay = self.policy.delay(*retries);
                    *retries += 1;
                    log::warn!(
                        "rate limited on {path}; retrying in {}ms",
                        delay.as_millis()
                    );
                    thread::sleep(delay);
                }
                other => {
                    return Err(Failure::Api(IngestError::Transport(format!(
                        "HTTP {other} from {path}"
                    ))))
                }
            }
        }
    }
}

#[derive(Deserialize)]
struct SearchResponse {
    statuses: Vec<Status>,
}

#[derive(Deserialize)]
struct Status {
    id_str: Option<String>,
    id: Option<u64>,
    full_text: Option<String>,
    text: Option<String>,
    created_at: String,
    user: User,
    #[serde(default)]
    retweeted_status: Option<serde_json::Value>,
    #[serde(default)]
    lang: Option<String>,
}

#[derive(Deserialize)]
struct User {
    screen_name: String,
}

impl Status {
    fn into_tweet(self) -> Result<(u64, RawTweet), IngestError> {
        let malformed = |m: &str| IngestError::MalformedResponse(m.to_owned());
        let numeric_id = match (&self.id_str, self.id) {
            (Some(s), _) => s
                .parse::<u64>()
                .map_err(|_| malformed("non-numeric id_str"))?,
            (None, Some(id)) => id,
            (None, None) => return Err(malformed("status without id")),
        };
        let text = self
            .full_text
            .or(self.text)
            .ok_or_else(|| malformed("status without text"))?;
        let created_at = DateTime::parse_from_str(&self.created_at, CREATED_AT_FORMAT)
            .map(|d| d.with_timezone(&Utc))
            .map_err(|_| malformed("unparseable created_at"))?;
        let is_retweet = self.retweeted_status.is_some() || text.starts_with("RT @");
        Ok((
            numeric_id,
            RawTweet {
                id: numeric_id.to_string(),
                text,
                created_at,
                author: self.user.screen_name,
                is_retweet,
                lang: self.lang,
            },
        ))
    }
}
