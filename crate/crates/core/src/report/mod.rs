//! Per-query aggregation and report rendering.

mod chart;
mod percent;
mod render;

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::classify::{ScoredTweet, SentimentLabel};

pub use chart::render_chart;
pub use percent::{percent_trunc, Percent};
pub use render::{render_table, render_text, TableFormat, TextOptions};

pub const DEFAULT_EXEMPLARS: usize = 10;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("percentage total must be positive")]
    TotalZero,
    #[error("count {n} exceeds total {total}")]
    CountExceedsTotal { n: u64, total: u64 },
    #[error("no scored tweets to aggregate")]
    EmptyBatch,
    #[error("query `{0}` appears twice in the report set")]
    DuplicateQuery(String),
    #[error("invalid percentage `{0}`")]
    InvalidPercent(String),
    #[error("table parse error on row {row}: {reason}")]
    TableParse { row: usize, reason: String },
}

/// Label counts behind a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub analyzed: u32,
    pub positive_n: u32,
    pub negative_n: u32,
    pub neutral_n: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exemplar {
    pub id: String,
    pub text: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Exemplars {
    pub positive: Vec<Exemplar>,
    pub negative: Vec<Exemplar>,
    pub neutral: Vec<Exemplar>,
}

impl Exemplars {
    fn class_mut(&mut self, label: SentimentLabel) -> &mut Vec<Exemplar> {
        match label {
            SentimentLabel::Positive => &mut self.positive,
            SentimentLabel::Negative => &mut self.negative,
            SentimentLabel::Neutral => &mut self.neutral,
        }
    }
}

/// Percentages for one query.
///
/// Reports computed by [`aggregate`] carry their [`Tally`]; reports built
/// from published figures with [`QueryReport::published`] do not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryReport {
    pub query: String,
    #[serde(flatten)]
    pub tally: Option<Tally>,
    pub positive_pct: Percent,
    pub negative_pct: Percent,
    pub neutral_pct: Percent,
    pub exemplars: Exemplars,
}

impl QueryReport {
    pub fn published(
        query: impl Into<String>,
        positive_pct: Percent,
        negative_pct: Percent,
        neutral_pct: Percent,
    ) -> Self {
        Self {
            query: query.into(),
            tally: None,
            positive_pct,
            negative_pct,
            neutral_pct,
            exemplars: Exemplars::default(),
        }
    }
}

/// Counts labels, truncates percentages and keeps the first `exemplar_limit`
/// tweets of each class in input order.
pub fn aggregate(
    query: &str,
    scored: &[ScoredTweet],
    exemplar_limit: usize,
) -> Result<QueryReport, ReportError> {
    if scored.is_empty() {
        return Err(ReportError::EmptyBatch);
    }
    let mut counts = [0u32; 3];
    let mut exemplars = Exemplars::default();
    for item in scored {
        let label = item.score.label;
        counts[label as usize] += 1;
        let class = exemplars.class_mut(label);
        if class.len() < exemplar_limit {
            class.push(Exemplar {
                id: item.tweet.id.clone(),
                text: item.tweet.text.clone(),
            });
        }
    }
    let [positive_n, negative_n, neutral_n] = counts;
    let analyzed = positive_n + negative_n + neutral_n;
    let pct = |n: u32| percent_trunc(u64::from(n), u64::from(analyzed));
    Ok(QueryReport {
        query: query.to_owned(),
        tally: Some(Tally {
            analyzed,
            positive_n,
            negative_n,
            neutral_n,
        }),
        positive_pct: pct(positive_n)?,
        negative_pct: pct(negative_n)?,
        neutral_pct: pct(neutral_n)?,
        exemplars,
    })
}

/// Ordered reports with unique query names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReportSet {
    pub generated_at: Option<String>,
    pub lexicon_version: Option<String>,
    reports: Vec<QueryReport>,
}

impl ReportSet {
    pub fn new(generated_at: Option<String>, lexicon_version: Option<String>) -> Self {
        Self {
            generated_at,
            lexicon_version,
            reports: Vec::new(),
        }
    }

    pub fn push(&mut self, report: QueryReport) -> Result<(), ReportError> {
        if self.reports.iter().any(|r| r.query == report.query) {
            return Err(ReportError::DuplicateQuery(report.query));
        }
        self.reports.push(report);
        Ok(())
    }

    pub fn reports(&self) -> &[QueryReport] {
        &self.reports
    }

    pub fn len(&self) -> usize {
        self.reports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reports.is_empty()
    }

    /// Reads published figures from CSV with header `query,positive,negative,neutral`.
    pub fn from_table_csv(text: &str) -> Result<Self, ReportError> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header_ok = reader
            .headers()
            .map(|h| {
                h.iter().map(str::to_lowercase).collect::<Vec<_>>()
                    == ["query", "positive", "negative", "neutral"]
            })
            .unwrap_or(false);
        if !header_ok {
            return Err(ReportError::TableParse {
                row: 1,
                reason: "expected header `query,positive,negative,neutral`".to_owned(),
            });
        }
        let mut set = Self::default();
        let mut seen = HashSet::new();
        for (idx, record) in reader.records().enumerate() {
            let row = idx + 2;
            let record = record.map_err(|e| ReportError::TableParse {
                row,
                reason: e.to_string(),
            })?;
            if record.len() != 4 {
                return Err(ReportError::TableParse {
                    row,
                    reason: format!("expected 4 fields, found {}", record.len()),
                });
            }
            let pct = |i: usize| record[i].parse::<Percent>();
            let query = record[0].to_owned();
            if !seen.insert(query.clone()) {
                return Err(ReportError::DuplicateQuery(query));
            }
            set.reports
                .push(QueryReport::published(query, pct(1)?, pct(2)?, pct(3)?));
        }
        Ok(set)
    }
}
