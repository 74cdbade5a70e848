//! Lexicon-count sentiment analysis for tweets.
//!
//! The pipeline mirrors a classic desk-tool workflow:
//!
//! 1. acquire and cache a sentiment dictionary ([`lexicon`]),
//! 2. load tweets from a search API or an offline corpus ([`ingest`]),
//! 3. clean and tokenize them ([`textprep`]),
//! 4. count positive and negative dictionary hits and label each tweet
//!    ([`classify`]),
//! 5. aggregate labels into truncated percentages and render text, CSV,
//!    JSON or SVG reports ([`report`]).
//!
//! ```
//! use tweet_sentiment::{bundled, classify, textprep};
//!
//! let lexicon = bundled::lexicon();
//! let tokens = textprep::clean_text("t1", "OMG what a GR8 day :)", bundled::stopwords(), bundled::abbreviations());
//! let score = classify::score(&tokens, lexicon);
//! assert_eq!(score.label, classify::SentimentLabel::Positive);
//! ```

pub mod bundled;
pub mod classify;
pub mod cli;
pub mod ingest;
pub mod lexicon;
pub mod report;
pub mod textprep;
