//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::collections::HashSet;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use tweet_sentiment::bundled;
use tweet_sentiment::classify::{self, SentimentLabel};
use tweet_sentiment::ingest::{self, Query, RetryPolicy, Session, PAGE_SIZE};
use tweet_sentiment::lexicon::{Lexicon, LexiconEntry};
use tweet_sentiment::report::{self, percent_trunc, ReportSet, TableFormat};
use tweet_sentiment::textprep::{self, CleanTokens, Span, Token, TokenKind};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tweet-sentiment"));
    for k in [
        ingest::ENV_CONSUMER_KEY,
        ingest::ENV_CONSUMER_SECRET,
        ingest::ENV_ACCESS_TOKEN,
        ingest::ENV_ACCESS_TOKEN_SECRET,
        "RUST_LOG",
    ] {
        cmd.env_remove(k);
    }
    cmd
}

fn offline_args(names: &[&str]) -> Vec<String> {
    names
        .iter()
        .flat_map(|n| {
            [
                "--offline".to_owned(),
                common::corpus_path(n).display().to_string(),
            ]
        })
        .collect()
}

fn trunc_hundredths(n: u64, total: u64) -> u64 {
    10_000 * n / total
}

fn round_half_up_hundredths(n: u64, total: u64) -> u64 {
    (20_000 * n + total) / (2 * total)
}

// 1. sample output reproduction
fn sample_output() -> Check {
    const EXPECTED: [&str; 3] = [
        "Positive tweets percentage: 16.39 %",
        "Negative tweets percentage: 72.13 %",
        "Neutral tweets percentage: 11.47 %",
    ];
    let target = (1639, 7213, 1147);
    let mut trunc_matches = Vec::new();
    let mut round_matches = 0;
    for total in 1..=300u64 {
        for p in 0..=total {
            for n in 0..=total - p {
                let u = total - p - n;
                let t = (
                    trunc_hundredths(p, total),
                    trunc_hundredths(n, total),
                    trunc_hundredths(u, total),
                );
                if t == target {
                    trunc_matches.push((p, n, u, total));
                }
                let r = (
                    round_half_up_hundredths(p, total),
                    round_half_up_hundredths(n, total),
                    round_half_up_hundredths(u, total),
                );
                if r == target {
                    round_matches += 1;
                }
            }
        }
    }
    ensure!(
        trunc_matches.first() == Some(&(10, 44, 7, 61)),
        "smallest truncation match {:?}",
        trunc_matches.first()
    );
    ensure!(
        round_half_up_hundredths(7, 61) == 1148,
        "round-half-up 7/61 gave {}",
        round_half_up_hundredths(7, 61)
    );
    ensure!(
        round_matches == 0,
        "{round_matches} triples also match under round-half-up"
    );

    let started = Instant::now();
    let out = bin()
        .arg("analyze")
        .args(offline_args(&["fake_news"]))
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    ensure!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let lines: Vec<&str> = stdout.lines().take(3).collect();
    ensure!(lines == EXPECTED, "got {lines:?}");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!(
        "exact lines in {} ms; truncation triples (total<=300) {:?}; round-half-up 7/61 = 11.48, 0 matches",
        elapsed.as_millis(),
        trunc_matches
    ))
}

// 2. rounding rule
fn rounding_oracle() -> Check {
    let mut checked = 0u64;
    for total in 1..=300u64 {
        for n in 0..=total {
            let p = u64::from(
                percent_trunc(n, total)
                    .map_err(|e| e.to_string())?
                    .hundredths(),
            );
            ensure!(
                p * total <= 10_000 * n && 10_000 * n < (p + 1) * total,
                "{n}/{total} -> {p}"
            );
            checked += 1;
        }
    }
    let case = percent_trunc(7, 61).map_err(|e| e.to_string())?.to_string();
    ensure!(case == "11.47", "7/61 -> {case}");
    Ok(format!(
        "{checked} (n, total) pairs within bound; 7/61 -> 11.47"
    ))
}

// 3. published table rendering
fn table_golden() -> Check {
    let csv = std::fs::read_to_string(common::fixtures().join("published_results.csv"))
        .map_err(|e| e.to_string())?;
    let set = ReportSet::from_table_csv(&csv).map_err(|e| e.to_string())?;
    let text = report::render_table(&set, TableFormat::Text);
    let golden = std::fs::read(common::fixtures().join("golden").join("published_results.txt"))
        .map_err(|e| e.to_string())?;
    ensure!(text == golden, "text table differs from golden file");
    let printed = [
        ("Movie", "53", "11.1", "35.8"),
        ("politics", "26.6", "12.2", "61.1"),
        ("fashion", "38.8", "13.3", "47.7"),
        ("fake news", "16.3", "72.1", "11.4"),
        ("Justice", "35.2", "15.9", "48.8"),
        ("Humanity", "36.9", "33.3", "29.7"),
    ];
    let csv_out = String::from_utf8(report::render_table(&set, TableFormat::Csv))
        .map_err(|e| e.to_string())?;
    let rows: Vec<&str> = csv_out.lines().skip(1).collect();
    ensure!(rows.len() == 6, "{} rows", rows.len());
    for (row, (q, p, n, u)) in rows.iter().zip(printed) {
        let cells: Vec<&str> = row.split(',').collect();
        ensure!(cells[0] == q, "query {} != {q}", cells[0]);
        for (cell, want) in cells[1..].iter().zip([p, n, u]) {
            let (a, b): (f64, f64) = (cell.parse().unwrap(), want.parse().unwrap());
            ensure!(a == b, "{q}: {cell} != {want}");
        }
    }
    ensure!(
        rows[0] == "Movie,53.00,11.10,35.80",
        "Movie row {}",
        rows[0]
    );
    Ok("6 rows byte-identical to golden; values equal the printed table".to_owned())
}

fn tokens_of(words: &[String]) -> CleanTokens {
    let mut offset = 0;
    let tokens = words
        .iter()
        .map(|w| {
            let span = Span {
                start: offset,
                end: offset + w.len(),
            };
            offset += w.len() + 1;
            Token {
                surface: w.clone(),
                kind: TokenKind::Word,
                span,
            }
        })
        .collect();
    CleanTokens {
        tweet_id: "t".into(),
        tokens,
    }
}

fn oracle(words: &[String], lexicon: &Lexicon) -> (u32, u32) {
    let (mut pos, mut neg) = (0, 0);
    for w in words {
        for (term, valence) in lexicon.entries() {
            if term == w.as_str() {
                if valence > 0.0 {
                    pos += 1;
                } else {
                    neg += 1;
                }
            }
        }
    }
    (pos, neg)
}

fn random_word(rng: &mut StdRng) -> String {
    let len = rng.random_range(1..=7);
    (0..len)
        .map(|_| rng.random_range(b'a'..=b'z') as char)
        .collect()
}

fn random_words(rng: &mut StdRng, vocab: &[String]) -> Vec<String> {
    let len = rng.random_range(0..30);
    (0..len)
        .map(|_| {
            if !vocab.is_empty() && rng.random_bool(0.6) {
                vocab[rng.random_range(0..vocab.len())].clone()
            } else {
                random_word(rng)
            }
        })
        .collect()
}

fn random_lexicon(rng: &mut StdRng) -> Lexicon {
    let mut terms = HashSet::new();
    let size = rng.random_range(1..40);
    while terms.len() < size {
        terms.insert(random_word(rng));
    }
    let mut terms: Vec<_> = terms.into_iter().collect();
    terms.sort();
    let entries = terms.iter().map(|t| {
        let magnitude = f64::from(rng.random_range(1..=100u32)) / 100.0;
        let v = if rng.random_bool(0.5) {
            magnitude
        } else {
            -magnitude
        };
        LexiconEntry::new(t, v).unwrap()
    });
    Lexicon::from_entries(entries.collect::<Vec<_>>(), "random").unwrap()
}

// 4. classifier oracle
fn classifier_oracle() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    let bundled_vocab: Vec<String> = bundled::lexicon()
        .entries()
        .map(|(t, _)| t.to_owned())
        .collect();
    let mut mismatches = 0;
    for i in 0..1_000 {
        let (lex, vocab) = if i % 2 == 0 {
            (bundled::lexicon().clone(), bundled_vocab.clone())
        } else {
            let lex = random_lexicon(&mut rng);
            let vocab = lex.entries().map(|(t, _)| t.to_owned()).collect();
            (lex, vocab)
        };
        let words = random_words(&mut rng, &vocab);
        let s = classify::score(&tokens_of(&words), &lex);
        if (s.positive_count, s.negative_count) != oracle(&words, &lex)
            || classify::label_of(s.polarity).ok() != Some(s.label)
        {
            mismatches += 1;
        }
    }
    ensure!(mismatches == 0, "{mismatches} mismatches");
    Ok("1000 token lists, 0 mismatches".to_owned())
}

// 5. sign flip
fn sign_flip() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_0005);
    let mut by_label = [0; 3];
    for _ in 0..200 {
        let lex = random_lexicon(&mut rng);
        let flipped = Lexicon::from_entries(
            lex.entries()
                .map(|(t, v)| LexiconEntry::new(t, -v).unwrap())
                .collect::<Vec<_>>(),
            "flipped",
        )
        .unwrap();
        let vocab: Vec<String> = lex.entries().map(|(t, _)| t.to_owned()).collect();
        let tokens = tokens_of(&random_words(&mut rng, &vocab));
        let (a, b) = (
            classify::score(&tokens, &lex),
            classify::score(&tokens, &flipped),
        );
        let want = match a.label {
            SentimentLabel::Positive => SentimentLabel::Negative,
            SentimentLabel::Negative => SentimentLabel::Positive,
            SentimentLabel::Neutral => SentimentLabel::Neutral,
        };
        ensure!(
            b.label == want && b.polarity == -a.polarity,
            "{a:?} vs {b:?}"
        );
        by_label[a.label as usize] += 1;
    }
    Ok(format!(
        "200/200 pairs (positive {}, negative {}, neutral {})",
        by_label[0], by_label[1], by_label[2]
    ))
}

const FRAGMENTS: [&str; 24] = [
    ":)",
    ":-(",
    ";)",
    ":D",
    "<3",
    "XD",
    "RT",
    "rt",
    "OMG",
    "gr8",
    "B4",
    "the",
    "…",
    "—",
    "«non»",
    "🙂",
    "@user",
    "#Sick",
    "#_",
    "https://t.co/x1",
    "http://",
    "don't",
    "\"quoted\"",
    "...",
];

fn fuzz_input(rng: &mut StdRng) -> String {
    let mut s = String::new();
    for _ in 0..rng.random_range(0..20) {
        match rng.random_range(0..4) {
            0 => s.push_str(FRAGMENTS[rng.random_range(0..FRAGMENTS.len())]),
            1 => s.push_str(&random_word(rng)),
            _ => {
                for _ in 0..rng.random_range(1..6) {
                    s.push(rng.random::<char>());
                }
            }
        }
        s.push_str([" ", "\t", "\n", "\u{a0}", ""][rng.random_range(0..5)]);
    }
    s
}

// 6. tokenizer totality and cleaning invariants
fn tokenizer_fuzz() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    let (sw, ab) = (bundled::stopwords(), bundled::abbreviations());
    let mut tokens_seen = 0usize;
    for i in 0..10_000 {
        let text = fuzz_input(&mut rng);
        let toks = panic::catch_unwind(|| textprep::tokenize(&text))
            .map_err(|_| format!("tokenize panicked on {text:?}"))?;
        for w in toks.windows(2) {
            ensure!(
                w[0].span.start < w[1].span.start && w[0].span.end <= w[1].span.start,
                "input {i}: {w:?}"
            );
        }
        for t in &toks {
            ensure!(
                t.span.start < t.span.end && t.span.end <= text.len(),
                "input {i}: bad span {t:?}"
            );
        }
        tokens_seen += toks.len();
        let clean = textprep::clean_text("t", &text, sw, ab);
        for t in &clean.tokens {
            ensure!(
                !sw.contains(&t.surface),
                "stop word {:?} in {text:?}",
                t.surface
            );
            ensure!(
                !matches!(
                    t.kind,
                    TokenKind::Url | TokenKind::Mention | TokenKind::Hashtag
                ),
                "{t:?} in {text:?}"
            );
            ensure!(
                !t.surface.starts_with('@')
                    && !t.surface.starts_with("http://")
                    && !t.surface.starts_with("https://"),
                "{t:?} in {text:?}"
            );
        }
    }
    Ok(format!("10000 inputs, {tokens_seen} tokens, no violations"))
}

// 7. ingestion against the mock server
fn ingestion() -> Check {
    let policy = RetryPolicy {
        max_retries: 3,
        initial_backoff: Duration::from_millis(5),
    };
    let bound = |count: u32| (count.div_ceil(PAGE_SIZE) + policy.max_retries) as usize;

    let server = common::serve("paginated.json");
    let mut s = Session::connect_with(
        common::credentials("paginated.json"),
        &server.base_url(),
        policy,
    )
    .map_err(|e| e.to_string())?;
    let tweets = s
        .fetch_tweets(&Query::new("movie", 250).unwrap())
        .map_err(|e| e.to_string())?;
    let unique: HashSet<_> = tweets.iter().map(|t| &t.id).collect();
    ensure!(
        tweets.len() == 250 && unique.len() == 250,
        "{} tweets, {} unique",
        tweets.len(),
        unique.len()
    );
    let pages = server.requests_to(ingest::SEARCH_PATH).len();
    ensure!(
        pages <= bound(250),
        "{pages} requests > bound {}",
        bound(250)
    );
    ensure!(server.mismatches().is_empty(), "{:?}", server.mismatches());

    let server = common::serve("rate_limited_once.json");
    let mut s = Session::connect_with(
        common::credentials("rate_limited_once.json"),
        &server.base_url(),
        policy,
    )
    .map_err(|e| e.to_string())?;
    let tweets = s
        .fetch_tweets(&Query::new("movie", 3).unwrap())
        .map_err(|e| e.to_string())?;
    let statuses: Vec<u16> = server
        .requests_to(ingest::SEARCH_PATH)
        .iter()
        .map(|r| r.status)
        .collect();
    ensure!(tweets.len() == 3, "{} tweets", tweets.len());
    ensure!(statuses == [429, 200], "statuses {statuses:?}");
    ensure!(statuses.len() <= bound(3), "bound");

    let server = common::serve("rate_limited_always.json");
    let mut s = Session::connect_with(
        common::credentials("rate_limited_always.json"),
        &server.base_url(),
        policy,
    )
    .map_err(|e| e.to_string())?;
    ensure!(
        s.fetch_tweets(&Query::new("movie", 3).unwrap()).is_err(),
        "endless 429 succeeded"
    );
    let tries = server.requests_to(ingest::SEARCH_PATH).len();
    ensure!(tries <= bound(3), "{tries} requests > bound {}", bound(3));

    Ok(format!(
        "250/250 unique over {pages} pages (bound {}); 429 then 200 in 2 requests; endless 429 stops at {tries} (bound {})",
        bound(250),
        bound(3)
    ))
}

// 8. end-to-end determinism
fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut compared = 0;
    for (label, corpora) in [
        ("single", &["fake_news"][..]),
        ("six", &common::CORPORA[..]),
    ] {
        for format in ["text", "csv", "json", "svg"] {
            let mut outputs = Vec::new();
            for run in 0..2 {
                let out: PathBuf = dir.path().join(format!("{label}-{format}-{run}"));
                let status = bin()
                    .args(["analyze", "--format", format, "--out"])
                    .arg(&out)
                    .args(offline_args(corpora))
                    .status()
                    .map_err(|e| e.to_string())?;
                ensure!(
                    status.success(),
                    "{label} {format} exit {:?}",
                    status.code()
                );
                let stdout = bin()
                    .args(["analyze", "--format", format])
                    .args(offline_args(corpora))
                    .output()
                    .map_err(|e| e.to_string())?
                    .stdout;
                let file = std::fs::read(&out).map_err(|e| e.to_string())?;
                ensure!(file == stdout, "{label} {format}: file and stdout differ");
                outputs.push(file);
            }
            ensure!(
                !outputs[0].is_empty() && outputs[0] == outputs[1],
                "{label} {format} differs between runs"
            );
            compared += 1;
        }
    }
    Ok(format!(
        "{compared} output pairs byte-identical (text, csv, json, svg; 1 and 6 queries)"
    ))
}

// 9. secrets hygiene
fn secrets_hygiene() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let secrets = common::secrets("live_two_queries.json");
    let mut captured: Vec<(String, Vec<u8>)> = Vec::new();
    let run = |captured: &mut Vec<(String, Vec<u8>)>,
               name: &str,
               transcript: &str,
               extra: &[&str],
               bad_secret: bool|
     -> Result<(), String> {
        let server = common::serve(transcript);
        let mut cmd = bin();
        for (k, v) in common::env_for(transcript) {
            cmd.env(k, v);
        }
        if bad_secret {
            cmd.env(ingest::ENV_ACCESS_TOKEN_SECRET, "wrong-secret");
        }
        cmd.env("RUST_LOG", "trace")
            .args(extra)
            .args(["--endpoint", &server.base_url()]);
        let Output {
            status,
            stdout,
            stderr,
        } = cmd.output().map_err(|e| e.to_string())?;
        if !bad_secret && !status.success() {
            return Err(format!(
                "{name}: exit {:?}: {}",
                status.code(),
                String::from_utf8_lossy(&stderr)
            ));
        }
        captured.push((format!("{name} stdout"), stdout));
        captured.push((format!("{name} stderr"), stderr));
        Ok(())
    };
    let corpus = dir.path().join("fetched.jsonl");
    run(
        &mut captured,
        "fetch",
        "three_tweets.json",
        &[
            "fetch",
            "-q",
            "movie",
            "--count",
            "3",
            "--out",
            corpus.to_str().unwrap(),
        ],
        false,
    )?;
    for format in ["text", "csv", "json", "svg"] {
        let out = dir.path().join(format!("live.{format}"));
        run(
            &mut captured,
            format,
            "live_two_queries.json",
            &[
                "analyze",
                "--live",
                "-q",
                "movie",
                "-q",
                "fake news",
                "--count",
                "3",
                "--format",
                format,
                "--out",
                out.to_str().unwrap(),
            ],
            false,
        )?;
        captured.push((
            format!("{format} report"),
            std::fs::read(&out).map_err(|e| e.to_string())?,
        ));
    }
    run(
        &mut captured,
        "single",
        "three_tweets.json",
        &["analyze", "--live", "-q", "movie", "--count", "3"],
        false,
    )?;
    run(
        &mut captured,
        "auth failure",
        "three_tweets.json",
        &["analyze", "--live", "-q", "movie", "--count", "3"],
        true,
    )?;
    captured.push((
        "corpus".into(),
        std::fs::read(&corpus).map_err(|e| e.to_string())?,
    ));

    let total_bytes: usize = captured.iter().map(|(_, b)| b.len()).sum();
    let log_lines: usize = captured
        .iter()
        .filter(|(n, _)| n.ends_with("stderr"))
        .map(|(_, b)| b.iter().filter(|&&c| c == b'\n').count())
        .sum();
    ensure!(log_lines > 0, "no log output captured");
    for (name, bytes) in &captured {
        let text = String::from_utf8_lossy(bytes);
        for s in &secrets {
            ensure!(!text.contains(s.as_str()), "credential found in {name}");
        }
    }
    Ok(format!(
        "{} streams, {total_bytes} bytes, {log_lines} log lines at trace level: 0 credential occurrences",
        captured.len()
    ))
}

fn main() {
    let checks: [Criterion; 9] = [
        ("sample output 16.39/72.13/11.47", sample_output),
        ("truncation rounding oracle", rounding_oracle),
        ("published table golden render", table_golden),
        ("classifier oracle equivalence", classifier_oracle),
        ("sign-flip symmetry", sign_flip),
        ("tokenizer totality and cleaning", tokenizer_fuzz),
        ("mock-server ingestion", ingestion),
        ("end-to-end determinism", determinism),
        ("secrets hygiene", secrets_hygiene),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (title, check)) in checks.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("criterion {}: PASS  {title}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {}: FAIL  {title}: {reason}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        checks.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
