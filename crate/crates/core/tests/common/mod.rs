#![allow(dead_code)]

use std::path::{Path, PathBuf};

use tweet_sentiment::classify::SentimentLabel;
use tweet_sentiment::ingest::mock::{MockServer, Transcript};
use tweet_sentiment::ingest::{self, Credentials};
use tweet_sentiment::textprep::RawTweet;

pub const CORPORA: [&str; 6] = [
    "movie",
    "politics",
    "fashion",
    "fake_news",
    "justice",
    "humanity",
];

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
}

pub fn corpus_path(name: &str) -> PathBuf {
    fixtures().join("corpora").join(format!("{name}.jsonl"))
}

pub fn corpus(name: &str) -> Vec<RawTweet> {
    ingest::read_corpus(corpus_path(name)).expect("fixture corpus")
}

/// Hand labels stored beside each corpus as `id<TAB>label`.
pub fn labels(name: &str) -> Vec<(String, SentimentLabel)> {
    let text =
        std::fs::read_to_string(fixtures().join("corpora").join(format!("{name}.labels"))).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (id, label) = l.split_once('\t').expect("id<TAB>label");
            let label = match label.trim() {
                "positive" => SentimentLabel::Positive,
                "negative" => SentimentLabel::Negative,
                "neutral" => SentimentLabel::Neutral,
                other => panic!("bad label {other}"),
            };
            (id.to_owned(), label)
        })
        .collect()
}

pub fn transcript(name: &str) -> Transcript {
    Transcript::load(fixtures().join("transcripts").join(name)).expect("transcript")
}

pub fn transcript_len(name: &str) -> usize {
    transcript(name).exchanges.len()
}

pub fn serve(name: &str) -> MockServer {
    MockServer::start(transcript(name)).expect("mock server")
}

/// The four credential strings a transcript expects, in env-var order.
pub fn secrets(name: &str) -> [String; 4] {
    let c = transcript(name)
        .credentials
        .expect("transcript credentials");
    [
        c.consumer_key,
        c.consumer_secret,
        c.access_token,
        c.access_token_secret,
    ]
}

pub fn credentials(name: &str) -> Credentials {
    let [a, b, c, d] = secrets(name);
    Credentials::new(a, b, c, d).unwrap()
}

pub fn env_for(name: &str) -> Vec<(&'static str, String)> {
    let [a, b, c, d] = secrets(name);
    vec![
        (ingest::ENV_CONSUMER_KEY, a),
        (ingest::ENV_CONSUMER_SECRET, b),
        (ingest::ENV_ACCESS_TOKEN, c),
        (ingest::ENV_ACCESS_TOKEN_SECRET, d),
    ]
}

/// An address on which nothing listens.
pub fn dead_addr() -> std::net::SocketAddr {
    let l = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    l.local_addr().unwrap()
}
