//! Word lists and lexicon shipped with the crate, so everything works offline.

use std::sync::OnceLock;

use crate::lexicon::{Abbreviations, Lexicon, StopWords};

pub const LEXICON_TSV: &str = include_str!("../data/lexicon.tsv");
pub const STOPWORDS_TXT: &str = include_str!("../data/stopwords.txt");
pub const ABBREVIATIONS_TSV: &str = include_str!("../data/abbreviations.tsv");
pub const EMOTICONS_TXT: &str = include_str!("../data/emoticons.txt");

pub fn lexicon() -> &'static Lexicon {
    static CELL: OnceLock<Lexicon> = OnceLock::new();
    CELL.get_or_init(|| Lexicon::parse(LEXICON_TSV).expect("bundled lexicon is valid"))
}

pub fn stopwords() -> &'static StopWords {
    static CELL: OnceLock<StopWords> = OnceLock::new();
    CELL.get_or_init(|| StopWords::parse(STOPWORDS_TXT).expect("bundled stop words are valid"))
}

pub fn abbreviations() -> &'static Abbreviations {
    static CELL: OnceLock<Abbreviations> = OnceLock::new();
    CELL.get_or_init(|| {
        Abbreviations::parse(ABBREVIATIONS_TSV).expect("bundled abbreviations are valid")
    })
}

/// Emoticons from the bundled table, one per entry, as written in the file.
pub fn emoticons() -> impl Iterator<Item = &'static str> {
    EMOTICONS_TXT
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
}
