use super::tokenize::{Token, TokenKind, Tokenizer};
use super::RawTweet;
use crate::lexicon::{Abbreviations, StopWords};

/// Scoreable tokens of one tweet: words and emoticons only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanTokens {
    pub tweet_id: String,
    pub tokens: Vec<Token>,
}

impl CleanTokens {
    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.surface.as_str())
    }
}

/// Cleans a tweet with the bundled emoticon table.
pub fn clean(raw: &RawTweet, stopwords: &StopWords, abbrevs: &Abbreviations) -> CleanTokens {
    clean_text(&raw.id, &raw.text, stopwords, abbrevs)
}

pub fn clean_text(
    tweet_id: &str,
    text: &str,
    stopwords: &StopWords,
    abbrevs: &Abbreviations,
) -> CleanTokens {
    Tokenizer::shared().clean_text(tweet_id, text, stopwords, abbrevs)
}

impl Tokenizer {
    pub fn clean(
        &self,
        raw: &RawTweet,
        stopwords: &StopWords,
        abbrevs: &Abbreviations,
    ) -> CleanTokens {
        self.clean_text(&raw.id, &raw.text, stopwords, abbrevs)
    }

    /// lowercase → tokenize → hashtags to body words → expand abbreviations
    /// → drop urls and mentions → drop stop words → drop leading `rt`.
    pub fn clean_text(
        &self,
        tweet_id: &str,
        text: &str,
        stopwords: &StopWords,
        abbrevs: &Abbreviations,
    ) -> CleanTokens {
        let lowered = text.to_lowercase();
        let mut tokens = Vec::new();
        for tok in self
            .tokenize(&lowered)
            .into_iter()
            .flat_map(|t| self.scoreable(t))
        {
            match abbrevs
                .expand(&tok.surface)
                .filter(|_| tok.kind == TokenKind::Word)
            {
                Some(expansion) => {
                    let expansion = expansion.to_lowercase();
                    tokens.extend(
                        self.tokenize(&expansion)
                            .into_iter()
                            .flat_map(|t| self.scoreable(t))
                            .map(|t| Token {
                                span: tok.span,
                                ..t
                            }),
                    );
                }
                None => tokens.push(tok),
            }
        }
        tokens.retain(|t| t.kind != TokenKind::Word || !stopwords.contains(&t.surface));
        let leading_markers = tokens
            .iter()
            .take_while(|t| t.kind == TokenKind::Word && t.surface == "rt")
            .count();
        tokens.drain(..leading_markers);
        CleanTokens {
            tweet_id: tweet_id.to_owned(),
            tokens,
        }
    }
}

impl Tokenizer {
    /// Words and emoticons pass; a hashtag yields its body under the word
    /// rules; urls and mentions yield nothing.
    fn scoreable(&self, tok: Token) -> Vec<Token> {
        match tok.kind {
            TokenKind::Word | TokenKind::Emoticon => vec![tok],
            TokenKind::Url | TokenKind::Mention => Vec::new(),
            TokenKind::Hashtag => {
                let offset = tok.span.start + 1;
                let body = tok.surface.strip_prefix('#').unwrap_or(&tok.surface);
                self.tokenize(body)
                    .into_iter()
                    .filter(|t| matches!(t.kind, TokenKind::Word | TokenKind::Emoticon))
                    .map(|t| Token {
                        span: super::Span {
                            start: offset + t.span.start,
                            end: offset + t.span.end,
                        },
                        ..t
                    })
                    .collect()
            }
        }
    }
}
