use std::fmt::Write as _;

use super::{Exemplar, QueryReport, ReportSet};

#[derive(Debug, Clone, Copy, Default)]
pub struct TextOptions {
    /// Also print a `Neutral tweets:` section.
    pub show_neutral: bool,
}

/// Plain-text report: three percentage lines followed by exemplar sections.
pub fn render_text(report: &QueryReport, opts: TextOptions) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Positive tweets percentage: {} %", report.positive_pct);
    let _ = writeln!(out, "Negative tweets percentage: {} %", report.negative_pct);
    let _ = writeln!(out, "Neutral tweets percentage: {} %", report.neutral_pct);
    let mut sections = vec![
        ("Positive tweets:", &report.exemplars.positive),
        ("Negative tweets:", &report.exemplars.negative),
    ];
    if opts.show_neutral {
        sections.push(("Neutral tweets:", &report.exemplars.neutral));
    }
    for (header, tweets) in sections {
        let _ = write!(out, "\n{header}\n\n");
        write_exemplars(&mut out, tweets);
    }
    out
}

fn write_exemplars(out: &mut String, tweets: &[Exemplar]) {
    for t in tweets {
        let _ = writeln!(out, "tweet: {}", t.text);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
    Json,
}

/// One row per query: Query, Positive, Negative, Neutral.
pub fn render_table(set: &ReportSet, format: TableFormat) -> Vec<u8> {
    match format {
        TableFormat::Text => table_text(set).into_bytes(),
        TableFormat::Csv => table_csv(set),
        TableFormat::Json => {
            let mut out = serde_json::to_vec_pretty(set).expect("report set serializes");
            out.push(b'\n');
            out
        }
    }
}

const HEADERS: [&str; 4] = ["Query", "Positive", "Negative", "Neutral"];

fn table_text(set: &ReportSet) -> String {
    let query_width = set
        .reports()
        .iter()
        .map(|r| r.query.chars().count())
        .chain([HEADERS[0].len()])
        .max()
        .unwrap_or(0);
    let num_width = HEADERS[1].len();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<qw$}  {:>nw$}  {:>nw$}  {:>nw$}",
        HEADERS[0],
        HEADERS[1],
        HEADERS[2],
        HEADERS[3],
        qw = query_width,
        nw = num_width
    );
    for r in set.reports() {
        let _ = writeln!(
            out,
            "{:<qw$}  {:>nw$}  {:>nw$}  {:>nw$}",
            r.query,
            r.positive_pct.to_string(),
            r.negative_pct.to_string(),
            r.neutral_pct.to_string(),
            qw = query_width,
            nw = num_width
        );
    }
    out
}

fn table_csv(set: &ReportSet) -> Vec<u8> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer
        .write_record(["query", "positive", "negative", "neutral"])
        .expect("in-memory csv write");
    for r in set.reports() {
        writer
            .write_record([
                r.query.clone(),
                r.positive_pct.to_string(),
                r.negative_pct.to_string(),
                r.neutral_pct.to_string(),
            ])
            .expect("in-memory csv write");
    }
    writer.into_inner().expect("in-memory csv flush")
}
