//! Turning collection and set names into concept terms.
//!
//! Names are split on separator characters only, never on whitespace, so
//! composite terms such as "South Africa" survive as one term. Each fragment
//! is lowercased, stripped of punctuation, filtered against a stoplist word
//! by word, and every remaining ASCII-alphabetic word is Porter-stemmed.

pub mod porter;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use porter::stem;

/// A normalized concept term: lowercase, stemmed, possibly multi-word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Term(String);

impl Term {
    /// Wraps already-normalized text, as read back from a stored artifact.
    ///
    /// Returns `None` for text that cannot be a term in any stored format:
    /// empty, padded with whitespace, or containing tabs or line breaks.
    pub fn new(text: impl Into<String>) -> Option<Self> {
        let text = text.into();
        let bad = text.is_empty()
            || text.trim() != text
            || text.chars().any(|c| matches!(c, '\t' | '\n' | '\r'));
        (!bad).then_some(Term(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Term {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl std::borrow::Borrow<str> for Term {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Which characters survive punctuation stripping.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StripPattern {
    /// Keep Unicode letters and digits ("köln", "viaggi", "2005").
    #[default]
    UnicodeAlphanumeric,
    /// Keep ASCII letters and digits only.
    AsciiAlphanumeric,
}

impl StripPattern {
    fn keeps(self, c: char) -> bool {
        match self {
            StripPattern::UnicodeAlphanumeric => c.is_alphanumeric(),
            StripPattern::AsciiAlphanumeric => c.is_ascii_alphanumeric(),
        }
    }
}

pub const DEFAULT_SEPARATORS: &str = "&<>:/,;|()[]{}+\\";

pub const DEFAULT_STOPLIST: &[&str] = &[
    "me", "myself", "my", "i", "our", "your", "the", "a", "an", "of", "in", "on", "at", "and",
    "or", "misc", "other", "stuff",
];

/// Characters every separator set must contain.
const REQUIRED_SEPARATORS: &str = "&<>:/,;|()";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizerConfig {
    pub separators: BTreeSet<char>,
    pub stoplist: BTreeSet<String>,
    #[serde(default)]
    pub strip_pattern: StripPattern,
}

impl Default for NormalizerConfig {
    fn default() -> Self {
        NormalizerConfig {
            separators: DEFAULT_SEPARATORS.chars().collect(),
            stoplist: DEFAULT_STOPLIST.iter().map(|s| s.to_string()).collect(),
            strip_pattern: StripPattern::default(),
        }
    }
}

impl NormalizerConfig {
    /// Default separators with the stoplist replaced by the contents of a
    /// stoplist file.
    pub fn with_stoplist_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(NormalizerConfig {
            stoplist: parse_stoplist(&text),
            ..Self::default()
        })
    }

    pub fn validate(&self) -> Result<()> {
        let missing: String = REQUIRED_SEPARATORS
            .chars()
            .filter(|c| !self.separators.contains(c))
            .collect();
        if !missing.is_empty() {
            return Err(Error::Config(format!(
                "separator set is missing required characters `{missing}`"
            )));
        }
        if let Some(word) = self
            .stoplist
            .iter()
            .find(|w| w.is_empty() || w.chars().any(char::is_uppercase))
        {
            return Err(Error::Config(format!(
                "stoplist entries must be non-empty lowercase words, found `{word}`"
            )));
        }
        Ok(())
    }

    fn is_separator(&self, c: char) -> bool {
        self.separators.contains(&c)
    }
}

/// Parses a stoplist: one word per line, `#` starts a comment.
pub fn parse_stoplist(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Splits a name on separator characters. Whitespace inside a fragment is
/// kept; fragments are trimmed and empty ones dropped.
pub fn tokenize<'a>(name: &'a str, cfg: &NormalizerConfig) -> Vec<&'a str> {
    name.split(|c| cfg.is_separator(c))
        .map(str::trim)
        .filter(|f| !f.is_empty())
        .collect()
}

/// Normalizes one fragment into a term, or `None` if nothing informative is
/// left.
pub fn normalize_token(token: &str, cfg: &NormalizerConfig) -> Option<Term> {
    let lowered = token.to_lowercase();
    let cleaned: String = lowered
        .chars()
        .filter_map(|c| {
            if c.is_whitespace() {
                Some(' ')
            } else if cfg.strip_pattern.keeps(c) {
                Some(c)
            } else {
                None
            }
        })
        .collect();
    let words: Vec<String> = cleaned
        .split_whitespace()
        .filter(|w| !cfg.stoplist.contains(*w))
        .map(stem_word)
        // "others" stems to "other"
        .filter(|w| !cfg.stoplist.contains(w))
        .collect();
    if words.is_empty() {
        None
    } else {
        Some(Term(words.join(" ")))
    }
}

fn stem_word(word: &str) -> String {
    if word.bytes().all(|b| b.is_ascii_lowercase()) {
        stem(word)
    } else {
        word.to_string()
    }
}

/// Tokenizes and normalizes a whole name; duplicates keep first position.
pub fn normalize_name(name: &str, cfg: &NormalizerConfig) -> Vec<Term> {
    let mut seen = BTreeSet::new();
    tokenize(name, cfg)
        .into_iter()
        .filter_map(|t| normalize_token(t, cfg))
        .filter(|t| seen.insert(t.clone()))
        .collect()
}
