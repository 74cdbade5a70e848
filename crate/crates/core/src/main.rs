use std::io;
use std::process::ExitCode;

use log::LevelFilter;

fn main() -> ExitCode {
    // The HTTP stack dumps raw request bytes, Authorization header included,
    // at trace level; cap it below that whatever RUST_LOG asks for.
    env_logger::Builder::new()
        .filter_level(LevelFilter::Warn)
        .parse_default_env()
        .filter_module("ureq", LevelFilter::Debug)
        .filter_module("ureq_proto", LevelFilter::Debug)
        .init();
    let env = |k: &str| std::env::var(k).ok();
    let code = tweet_sentiment::cli::run(
        std::env::args_os(),
        &env,
        &mut io::stdout(),
        &mut io::stderr(),
    );
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}
