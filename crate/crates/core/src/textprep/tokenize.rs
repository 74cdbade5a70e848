//! Whitespace tokenizer with tweet-aware token classes.
//!
//! Input is split on Unicode whitespace. Each chunk is then classified:
//! emoticons from the table match first (case-insensitively), then leading
//! punctuation other than `@`/`#` is dropped and the rest is checked for a
//! URL scheme, a `@handle`, or a `#tag`. Anything left over is a word,
//! stripped of surrounding punctuation and lowercased. A handle or tag that
//! is followed by more text (`@user's`) yields a second token for the tail.

use std::collections::HashSet;
use std::sync::OnceLock;

use crate::bundled;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Hashtag,
    Mention,
    Url,
    Emoticon,
}

/// Byte range into the tokenized text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct Tokenizer {
    // lowercase
    emoticons: HashSet<String>,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Self::with_emoticons(bundled::emoticons())
    }
}

/// Tokenizes with the bundled emoticon table.
pub fn tokenize(text: &str) -> Vec<Token> {
    Tokenizer::shared().tokenize(text)
}

impl Tokenizer {
    pub fn with_emoticons<I, S>(emoticons: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            emoticons: emoticons
                .into_iter()
                .map(|e| e.as_ref().trim().to_lowercase())
                .filter(|e| !e.is_empty())
                .collect(),
        }
    }

    /// Process-wide tokenizer over the bundled emoticon table.
    pub fn shared() -> &'static Tokenizer {
        static CELL: OnceLock<Tokenizer> = OnceLock::new();
        CELL.get_or_init(Tokenizer::default)
    }

    pub fn is_emoticon(&self, s: &str) -> bool {
        self.emoticons.contains(&s.to_lowercase())
    }

    pub fn tokenize(&self, text: &str) -> Vec<Token> {
        let mut out = Vec::new();
        let mut chunk_start = None;
        for (i, c) in text.char_indices() {
            match (c.is_whitespace(), chunk_start) {
                (true, Some(s)) => {
                    self.push_chunk(text, s, i, &mut out);
                    chunk_start = None;
                }
                (false, None) => chunk_start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = chunk_start {
            self.push_chunk(text, s, text.len(), &mut out);
        }
        out
    }

    fn push_chunk(&self, text: &str, start: usize, end: usize, out: &mut Vec<Token>) {
        let chunk = &text[start..end];
        if self.is_emoticon(chunk) {
            out.push(token(chunk.to_owned(), TokenKind::Emoticon, start, end));
            return;
        }
        let Some(lead) = chunk
            .char_indices()
            .find(|&(_, c)| !is_punct(c) || c == '@' || c == '#')
            .map(|(i, _)| i)
        else {
            return;
        };
        let start = start + lead;
        let body = &text[start..end];

        if let Some(url_end) = url_len(body) {
            out.push(token(
                body[..url_end].to_owned(),
                TokenKind::Url,
                start,
                start + url_end,
            ));
            return;
        }

        let mut chars = body.chars();
        let sigil = chars.next();
        let kind = match sigil {
            Some('@') => Some(TokenKind::Mention),
            Some('#') => Some(TokenKind::Hashtag),
            _ => None,
        };
        if let Some(kind) = kind {
            let name_len: usize = chars
                .take_while(|&c| is_handle_char(c))
                .map(char::len_utf8)
                .sum();
            if name_len > 0 {
                let sym_end = start + 1 + name_len;
                out.push(token(
                    text[start..sym_end].to_lowercase(),
                    kind,
                    start,
                    sym_end,
                ));
                if sym_end < end {
                    self.push_word(text, sym_end, end, out);
                }
                return;
            }
        }
        self.push_word(text, start, end, out);
    }

    fn push_word(&self, text: &str, start: usize, end: usize, out: &mut Vec<Token>) {
        let raw = &text[start..end];
        if self.is_emoticon(raw) {
            out.push(token(raw.to_owned(), TokenKind::Emoticon, start, end));
            return;
        }
        let trimmed_start = raw.trim_start_matches(is_punct);
        let start = start + (raw.len() - trimmed_start.len());
        let word = trimmed_start.trim_end_matches(is_punct);
        if word.is_empty() {
            return;
        }
        let end = start + word.len();
        if let Some(url_end) = url_len(word) {
            out.push(token(
                word[..url_end].to_owned(),
                TokenKind::Url,
                start,
                start + url_end,
            ));
            return;
        }
        let kind = if self.is_emoticon(word) {
            TokenKind::Emoticon
        } else {
            TokenKind::Word
        };
        out.push(token(word.to_lowercase(), kind, start, end));
    }
}

fn token(surface: String, kind: TokenKind, start: usize, end: usize) -> Token {
    Token {
        surface,
        kind,
        span: Span { start, end },
    }
}

fn is_handle_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// ASCII punctuation plus the common Unicode quote, dash and ellipsis marks.
pub(crate) fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(c, '\u{2000}'..='\u{206F}' | '\u{3000}'..='\u{303F}')
        || matches!(c, '«' | '»' | '¡' | '¿' | '·' | '\u{FEFF}')
}

/// Byte length of a URL at the start of `s`, without trailing punctuation.
fn url_len(s: &str) -> Option<usize> {
    let scheme = ["http://", "https://"].into_iter().find(|p| {
        s.len() >= p.len() && s.is_char_boundary(p.len()) && s[..p.len()].eq_ignore_ascii_case(p)
    })?;
    let trimmed = s.trim_end_matches(|c: char| {
        matches!(
            c,
            '.' | ',' | ';' | ':' | '!' | '?' | ')' | ']' | '}' | '>' | '"' | '\''
        ) || matches!(c, '\u{2018}'..='\u{201F}' | '\u{2026}')
    });
    (trimmed.len() > scheme.len()).then_some(trimmed.len())
}
