//! Command-line front end.
//!
//! Exit codes: 0 success, 2 authentication or missing credentials,
//! 3 transport failure or unreachable lexicon source without cache,
//! 4 lexicon or word-list error, 5 nothing to analyze, 64 usage error,
//! 65 malformed corpus, 74 output I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bundled;
use crate::classify::{self, ScoredTweet};
use crate::ingest::{self, Credentials, IngestError, Query, RetryPolicy, Session};
use crate::lexicon::{
    self, Abbreviations, CacheOptions, FetchError, Lexicon, SourceLocator, StopWords,
};
use crate::report::{self, ReportSet, TableFormat, TextOptions};
use crate::textprep::RawTweet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_AUTH: i32 = 2;
pub const EXIT_TRANSPORT: i32 = 3;
pub const EXIT_LEXICON: i32 = 4;
pub const EXIT_NO_TWEETS: i32 = 5;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(
    name = "tweet-sentiment",
    version,
    about = "Lexicon-based sentiment analysis for tweets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fetch tweets for a query from the search API into a corpus file.
    Fetch(FetchArgs),
    /// Clean, score and report on tweets from corpus files or the live API.
    Analyze(AnalyzeArgs),
    /// Download the lexicon into the cache and report its counts.
    LexiconUpdate(LexiconUpdateArgs),
    /// Render a table or chart from published `query,positive,negative,neutral` figures.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
struct FetchArgs {
    #[arg(short, long, default_value = ingest::DEFAULT_QUERY)]
    query: String,
    #[arg(long, default_value_t = ingest::DEFAULT_COUNT)]
    count: u32,
    /// Corpus file to write.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = ingest::DEFAULT_ENDPOINT)]
    endpoint: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Args)]
struct WordListArgs {
    /// Lexicon file path or URL (URLs are fetched through the cache).
    #[arg(long)]
    lexicon: Option<String>,
    #[arg(long)]
    stopwords: Option<PathBuf>,
    #[arg(long)]
    abbrev: Option<PathBuf>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Query name; repeatable. Pairs with --offline in order.
    #[arg(short, long = "query")]
    queries: Vec<String>,
    /// Corpus file; repeatable.
    #[arg(long = "offline")]
    offline: Vec<PathBuf>,
    /// Fetch tweets from the search API instead of corpus files.
    #[arg(long, conflicts_with = "offline")]
    live: bool,
    #[arg(long, default_value_t = ingest::DEFAULT_COUNT)]
    count: u32,
    #[command(flatten)]
    lists: WordListArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = report::DEFAULT_EXEMPLARS)]
    exemplars: usize,
    #[arg(long)]
    show_neutral: bool,
    #[arg(long, default_value = ingest::DEFAULT_ENDPOINT)]
    endpoint: String,
}

#[derive(Debug, Args)]
struct LexiconUpdateArgs {
    /// Lexicon source: URL or file path.
    #[arg(long)]
    lexicon: String,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Warn when a cached copy used as fallback is older than this many seconds.
    #[arg(long)]
    max_age: Option<u64>,
}

#[derive(Debug, Args)]
struct RenderArgs {
    /// CSV with header `query,positive,negative,neutral`.
    #[arg(long)]
    table: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Process environment lookups; tests supply their own.
pub type EnvLookup<'a> = &'a dyn Fn(&str) -> Option<String>;

struct Io<'a> {
    env: EnvLookup<'a>,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    fn warn(&mut self, msg: impl std::fmt::Display) {
        let _ = writeln!(self.stderr, "warning: {msg}");
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, env: EnvLookup<'_>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let mut io = Io {
        env,
        stdout,
        stderr,
    };
    let result = match cli.command {
        Command::Fetch(args) => cmd_fetch(args, &mut io),
        Command::Analyze(args) => cmd_analyze(args, &mut io),
        Command::LexiconUpdate(args) => cmd_lexicon_update(args, &mut io),
        Command::Render(args) => cmd_render(args, &mut io),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(io.stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn ingest_failure(e: IngestError) -> Failure {
    let code = match e {
        IngestError::MissingCredential(_)
        | IngestError::EmptyCredential(_)
        | IngestError::AuthFailed => EXIT_AUTH,
        IngestError::InvalidQuery(_) | IngestError::InvalidEndpoint(_) => EXIT_USAGE,
        IngestError::EndpointUnreachable(_)
        | IngestError::RateLimited { .. }
        | IngestError::Transport(_)
        | IngestError::MalformedResponse(_) => EXIT_TRANSPORT,
    };
    Failure::new(code, e.to_string())
}

fn open_session(io: &Io<'_>, endpoint: &str) -> Result<Session, Failure> {
    let creds = Credentials::from_env(|k| (io.env)(k)).map_err(ingest_failure)?;
    Session::connect_with(creds, endpoint, RetryPolicy::default()).map_err(ingest_failure)
}

fn cmd_fetch(args: FetchArgs, io: &mut Io<'_>) -> Outcome {
    let query = Query::new(args.query, args.count).map_err(ingest_failure)?;
    let mut session = open_session(io, &args.endpoint)?;
    let tweets = session.fetch_tweets(&query).map_err(ingest_failure)?;
    session.close();
    ingest::write_corpus(&tweets, &args.out).map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
    let _ = writeln!(
        io.stdout,
        "fetched {} tweets for \"{}\" into {}",
        tweets.len(),
        query.text(),
        args.out.display()
    );
    Ok(())
}

fn default_cache_dir(io: &Io<'_>) -> PathBuf {
    if let Some(dir) = (io.env)("XDG_CACHE_HOME").filter(|d| !d.is_empty()) {
        return Path::new(&dir).join("tweet-sentiment");
    }
    if let Some(home) = (io.env)("HOME").filter(|d| !d.is_empty()) {
        return Path::new(&home).join(".cache").join("tweet-sentiment");
    }
    PathBuf::from(".tweet-sentiment-cache")
}

fn lexicon_failure(e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_LEXICON, e.to_string())
}

struct WordLists {
    lexicon: Lexicon,
    stopwords: StopWords,
    abbrevs: Abbreviations,
}

fn load_word_lists(args: &WordListArgs, io: &mut Io<'_>) -> Result<WordLists, Failure> {
    let lexicon = match &args.lexicon {
        None => bundled::lexicon().clone(),
        Some(raw) => match SourceLocator::parse(raw) {
            SourceLocator::File(path) => lexicon::load_lexicon(path).map_err(lexicon_failure)?,
            remote => {
                let dir = args
                    .cache_dir
                    .clone()
                    .unwrap_or_else(|| default_cache_dir(io));
                let cached = lexicon::fetch_and_cache(&remote, &dir, &CacheOptions::default())
                    .map_err(lexicon_failure)?;
                if cached.stale {
                    io.warn(format!(
                        "lexicon source unreachable; using stale cached copy {}",
                        cached.path.display()
                    ));
                }
                lexicon::load_lexicon(&cached.path).map_err(lexicon_failure)?
            }
        },
    };
    let stopwords = match &args.stopwords {
        None => bundled::stopwords().clone(),
        Some(p) => StopWords::load(p).map_err(lexicon_failure)?,
    };
    let abbrevs = match &args.abbrev {
        None => bundled::abbreviations().clone(),
        Some(p) => Abbreviations::load(p).map_err(lexicon_failure)?,
    };
    Ok(WordLists {
        lexicon,
        stopwords,
        abbrevs,
    })
}

fn query_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().replace('_', " "))
        .unwrap_or_else(|| path.display().to_string())
}

fn gather_inputs(
    args: &AnalyzeArgs,
    io: &mut Io<'_>,
) -> Result<Vec<(String, Vec<RawTweet>)>, Failure> {
    if args.live {
        let queries = if args.queries.is_empty() {
            vec![ingest::DEFAULT_QUERY.to_owned()]
        } else {
            args.queries.clone()
        };
        let queries: Vec<Query> = queries
            .into_iter()
            .map(|q| Query::new(q, args.count))
            .collect::<Result<_, _>>()
            .map_err(ingest_failure)?;
        let mut session = open_session(io, &args.endpoint)?;
        let mut out = Vec::new();
        for q in &queries {
            let tweets = session.fetch_tweets(q).map_err(ingest_failure)?;
            out.push((q.text().to_owned(), tweets));
        }
        session.close();
        return Ok(out);
    }
    if args.offline.is_empty() {
        return Err(Failure::new(
            EXIT_USAGE,
            "analyze needs --offline <corpus> or --live",
        ));
    }
    if !args.queries.is_empty() && args.queries.len() != args.offline.len() {
        return Err(Failure::new(
            EXIT_USAGE,
            format!(
                "{} queries given for {} corpus files; pass one --query per --offline or none",
                args.queries.len(),
                args.offline.len()
            ),
        ));
    }
    let mut out = Vec::new();
    for (i, path) in args.offline.iter().enumerate() {
        let name = args
            .queries
            .get(i)
            .cloned()
            .unwrap_or_else(|| query_name(path));
        let tweets = ingest::read_corpus(path).map_err(|e| match e {
            ingest::CorpusError::Io { .. } => Failure::new(EXIT_IO, e.to_string()),
            other => Failure::new(EXIT_DATA, other.to_string()),
        })?;
        out.push((name, tweets));
    }
    Ok(out)
}

fn cmd_analyze(args: AnalyzeArgs, io: &mut Io<'_>) -> Outcome {
    let lists = load_word_lists(&args.lists, io)?;
    let inputs = gather_inputs(&args, io)?;

    // queries are scored in parallel; reports and warnings keep input order
    let batches: Vec<Vec<classify::BatchItem>> = std::thread::scope(|scope| {
        let handles: Vec<_> = inputs
            .iter()
            .map(|(_, tweets)| {
                scope.spawn(|| {
                    classify::classify_batch(
                        tweets,
                        &lists.lexicon,
                        &lists.stopwords,
                        &lists.abbrevs,
                    )
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("classifier thread panicked"))
            .collect()
    });

    let mut reports = Vec::new();
    let mut latest = None;
    for ((query, tweets), batch) in inputs.iter().zip(batches) {
        let mut scored: Vec<ScoredTweet> = Vec::with_capacity(tweets.len());
        for item in batch {
            match item {
                Ok(s) => scored.push(s),
                Err(e) => io.warn(format!("skipping {e}")),
            }
        }
        if scored.is_empty() {
            return Err(Failure::new(
                EXIT_NO_TWEETS,
                format!("no tweets to analyze for \"{query}\""),
            ));
        }
        latest = scored
            .iter()
            .map(|s| s.tweet.created_at)
            .chain(latest)
            .max();
        let report = report::aggregate(query, &scored, args.exemplars)
            .map_err(|e| Failure::new(EXIT_NO_TWEETS, e.to_string()))?;
        reports.push(report);
    }

    let mut set = ReportSet::new(
        latest.map(|t| t.to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
        Some(lists.lexicon.version().to_owned()),
    );
    let single = reports.len() == 1;
    for r in reports {
        set.push(r)
            .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    }
    let bytes = match args.format {
        OutputFormat::Text if single => report::render_text(
            &set.reports()[0],
            TextOptions {
                show_neutral: args.show_neutral,
            },
        )
        .into_bytes(),
        format => render_set(&set, format),
    };
    emit(io, args.out.as_deref(), &bytes)
}

fn render_set(set: &ReportSet, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Text => report::render_table(set, TableFormat::Text),
        OutputFormat::Csv => report::render_table(set, TableFormat::Csv),
        OutputFormat::Json => report::render_table(set, TableFormat::Json),
        OutputFormat::Svg => report::render_chart(set),
    }
}

fn emit(io: &mut Io<'_>, out: Option<&Path>, bytes: &[u8]) -> Outcome {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| Failure::new(EXIT_IO, format!("cannot write {}: {e}", path.display()))),
        None => io
            .stdout
            .write_all(bytes)
            .map_err(|e| Failure::new(EXIT_IO, format!("cannot write output: {e}"))),
    }
}

fn cmd_lexicon_update(args: LexiconUpdateArgs, io: &mut Io<'_>) -> Outcome {
    let source = SourceLocator::parse(&args.lexicon);
    let dir = args
        .cache_dir
        .clone()
        .unwrap_or_else(|| default_cache_dir(io));
    let opts = CacheOptions {
        max_age: args.max_age.map(std::time::Duration::from_secs),
        ..CacheOptions::default()
    };
    let cached = lexicon::fetch_and_cache(&source, &dir, &opts).map_err(|e| match e {
        FetchError::SourceUnreachableNoCache { .. } => Failure::new(EXIT_TRANSPORT, e.to_string()),
        FetchError::CacheWriteFailed { .. } => Failure::new(EXIT_IO, e.to_string()),
    })?;
    if cached.stale {
        io.warn(format!(
            "lexicon source {source} unreachable; using stale cached copy"
        ));
    }
    if cached.expired {
        io.warn("cached lexicon is older than --max-age");
    }
    let lex = lexicon::load_lexicon(&cached.path).map_err(lexicon_failure)?;
    let _ = writeln!(io.stdout, "cache: {}", cached.path.display());
    let _ = writeln!(
        io.stdout,
        "entries: {} (positive {}, negative {})",
        lex.len(),
        lex.positive_count(),
        lex.negative_count()
    );
    let _ = writeln!(io.stdout, "version: {}", lex.version());
    let _ = writeln!(
        io.stdout,
        "status: {}",
        if cached.stale { "stale" } else { "fresh" }
    );
    Ok(())
}

fn cmd_render(args: RenderArgs, io: &mut Io<'_>) -> Outcome {
    let text = std::fs::read_to_string(&args.table).map_err(|e| {
        Failure::new(
            EXIT_IO,
            format!("cannot read {}: {e}", args.table.display()),
        )
    })?;
    let set =
        ReportSet::from_table_csv(&text).map_err(|e| Failure::new(EXIT_DATA, e.to_string()))?;
    emit(io, args.out.as_deref(), &render_set(&set, args.format))
}
