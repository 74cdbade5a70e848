//! Dictionary-hit counting and three-way labeling.
//!
//! Each clean token found in the lexicon increments the positive or the
//! negative count according to the sign of its valence; magnitudes are not
//! used. Polarity is `(pos - neg) / (pos + neg)`, or 0 with no hits, and the
//! label is its sign.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{Abbreviations, Lexicon, StopWords};
use crate::textprep::{self, CleanTokens, RawTweet, TweetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentLabel {
    Positive,
    Negative,
    Neutral,
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Positive => "positive",
            Self::Negative => "negative",
            Self::Neutral => "neutral",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("polarity {0} is outside [-1, 1]")]
    InputOutOfRange(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TweetScore {
    pub tweet_id: String,
    pub positive_count: u32,
    pub negative_count: u32,
    pub scored_total: u32,
    pub polarity: f64,
    pub label: SentimentLabel,
}

impl TweetScore {
    fn from_counts(tweet_id: String, positive_count: u32, negative_count: u32) -> Self {
        let scored_total = positive_count + negative_count;
        let polarity = if scored_total == 0 {
            0.0
        } else {
            (f64::from(positive_count) - f64::from(negative_count)) / f64::from(scored_total)
        };
        let label = match positive_count.cmp(&negative_count) {
            std::cmp::Ordering::Greater => SentimentLabel::Positive,
            std::cmp::Ordering::Less => SentimentLabel::Negative,
            std::cmp::Ordering::Equal => SentimentLabel::Neutral,
        };
        Self {
            tweet_id,
            positive_count,
            negative_count,
            scored_total,
            polarity,
            label,
        }
    }
}

pub fn score(tokens: &CleanTokens, lexicon: &Lexicon) -> TweetScore {
    let (mut pos, mut neg) = (0u32, 0u32);
    for valence in tokens.surfaces().filter_map(|s| lexicon.lookup(s)) {
        if valence > 0.0 {
            pos += 1;
        } else if valence < 0.0 {
            neg += 1;
        }
    }
    TweetScore::from_counts(tokens.tweet_id.clone(), pos, neg)
}

/// Sign rule: exact zero is neutral.
pub fn label_of(polarity: f64) -> Result<SentimentLabel, ClassifyError> {
    if !(-1.0..=1.0).contains(&polarity) {
        return Err(ClassifyError::InputOutOfRange(polarity));
    }
    Ok(if polarity > 0.0 {
        SentimentLabel::Positive
    } else if polarity < 0.0 {
        SentimentLabel::Negative
    } else {
        SentimentLabel::Neutral
    })
}

/// A tweet together with its score.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredTweet {
    pub tweet: RawTweet,
    pub score: TweetScore,
}

/// A tweet that could not be scored.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("tweet {tweet_id}: {error}")]
pub struct BatchError {
    pub tweet_id: String,
    pub error: TweetError,
}

pub type BatchItem = Result<ScoredTweet, BatchError>;

/// Validates, cleans and scores each tweet, keeping input order.
///
/// Invalid tweets become error records in place; the batch never aborts.
pub fn classify_batch(
    tweets: &[RawTweet],
    lexicon: &Lexicon,
    stopwords: &StopWords,
    abbrevs: &Abbreviations,
) -> Vec<BatchItem> {
    let mut seen = HashSet::new();
    tweets
        .iter()
        .map(|raw| {
            let fail = |error| BatchError {
                tweet_id: raw.id.clone(),
                error,
            };
            let tweet = textprep::validate_tweet(raw.clone()).map_err(fail)?;
            if !seen.insert(tweet.id.clone()) {
                return Err(fail(TweetError::DuplicateId(tweet.id.clone())));
            }
            let tokens = textprep::clean(&tweet, stopwords, abbrevs);
            let score = score(&tokens, lexicon);
            Ok(ScoredTweet { tweet, score })
        })
        .collect()
}
