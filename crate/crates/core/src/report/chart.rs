//! Grouped bar chart as standalone SVG.
//!
//! Geometry is computed in hundredths of a pixel with integer math, so equal
//! inputs always give identical bytes and bar heights are exactly
//! proportional to the percentages.

use std::fmt::Write as _;

use super::{Percent, ReportSet};

const PLOT_LEFT: u32 = 60;
const PLOT_TOP: u32 = 60;
const PLOT_HEIGHT: u32 = 300;
const BAR_WIDTH: u32 = 20;
const BAR_GAP: u32 = 4;
const GROUP_GAP: u32 = 30;
const MIN_WIDTH: u32 = 420;

const SERIES: [(&str, &str, &str); 3] = [
    ("positive", "Positive", "#2e7d32"),
    ("negative", "Negative", "#c62828"),
    ("neutral", "Neutral", "#757575"),
];

/// Fixed-point centipixels rendered as `123.45`.
struct Cpx(u32);

impl std::fmt::Display for Cpx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

fn bar_height(p: Percent) -> Cpx {
    // PLOT_HEIGHT px spans 10_000 hundredths
    Cpx(p.hundredths() * PLOT_HEIGHT / 100)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if (c as u32) < 0x20 && !matches!(c, '\t' | '\n' | '\r') => {}
            c => out.push(c),
        }
    }
    out
}

pub fn render_chart(set: &ReportSet) -> Vec<u8> {
    let group_width = 3 * BAR_WIDTH + 2 * BAR_GAP;
    let n = set.len() as u32;
    let plot_width = GROUP_GAP + n * (group_width + GROUP_GAP);
    let width = (PLOT_LEFT + plot_width + 20).max(MIN_WIDTH);
    let height = PLOT_TOP + PLOT_HEIGHT + 60;
    let baseline = PLOT_TOP + PLOT_HEIGHT;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    svg.push_str("<style>");
    for (key, _, color) in SERIES {
        let _ = write!(svg, ".bar-{key},.legend-{key}{{fill:{color}}}");
    }
    svg.push_str(".grid{stroke:#ddd}.axis{stroke:#333}</style>\n");
    let _ = writeln!(
        svg,
        r#"<text class="title" x="{}" y="24" text-anchor="middle" font-size="16">Sentiment results by query</text>"#,
        width / 2
    );

    // legend
    for (i, (key, name, _)) in SERIES.iter().enumerate() {
        let x = PLOT_LEFT + i as u32 * 100;
        let _ = writeln!(
            svg,
            r#"<rect class="legend-{key}" x="{x}" y="36" width="12" height="12"/><text class="legend-label" x="{}" y="46">{name}</text>"#,
            x + 16
        );
    }

    // y axis, 0..100 in steps of 20
    for tick in (0..=100u32).step_by(20) {
        let y = baseline * 100 - tick * PLOT_HEIGHT;
        let _ = writeln!(
            svg,
            r#"<line class="grid" x1="{PLOT_LEFT}" y1="{y}" x2="{}" y2="{y}"/><text class="tick" x="{}" y="{}" text-anchor="end">{tick}</text>"#,
            PLOT_LEFT + plot_width,
            PLOT_LEFT - 6,
            Cpx(y + 400),
            y = Cpx(y),
        );
    }
    let _ = writeln!(
        svg,
        r#"<line class="axis" x1="{PLOT_LEFT}" y1="{PLOT_TOP}" x2="{PLOT_LEFT}" y2="{baseline}"/><line class="axis" x1="{PLOT_LEFT}" y1="{baseline}" x2="{}" y2="{baseline}"/>"#,
        PLOT_LEFT + plot_width
    );
    let _ = writeln!(
        svg,
        r#"<text class="axis-label" x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">Percentage</text>"#,
        PLOT_TOP + PLOT_HEIGHT / 2,
        PLOT_TOP + PLOT_HEIGHT / 2
    );

    for (g, report) in set.reports().iter().enumerate() {
        let group_x = PLOT_LEFT + GROUP_GAP + g as u32 * (group_width + GROUP_GAP);
        let query = escape(&report.query);
        let _ = writeln!(svg, r#"<g class="query-group" data-query="{query}">"#);
        let values = [report.positive_pct, report.negative_pct, report.neutral_pct];
        for (i, ((key, _, _), pct)) in SERIES.iter().zip(values).enumerate() {
            let x = group_x + i as u32 * (BAR_WIDTH + BAR_GAP);
            let h = bar_height(pct);
            let y = Cpx(baseline * 100 - h.0);
            let _ = writeln!(
                svg,
                r#"<rect class="bar-{key}" x="{x}" y="{y}" width="{BAR_WIDTH}" height="{h}"><title>{query} {key} {pct}%</title></rect>"#
            );
        }
        let _ = writeln!(
            svg,
            r#"<text class="query-label" x="{}" y="{}" text-anchor="middle">{query}</text>"#,
            group_x + group_width / 2,
            baseline + 18
        );
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    svg.into_bytes()
}
