//! Text analysis shared by indexing, querying and thesaurus loading.
//!
//! The pipeline is deliberately small: whitespace tokenization, trimming of
//! leading/trailing punctuation, then an optional chain of foldings
//! (case, Arabic diacritics, alef and final-ya variants) and a stopword
//! filter. There is no stemming.

use std::borrow::Borrow;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use unicode_categories::UnicodeCategories;

use crate::error::{Error, Result};

/// A normalized index term. Never empty, never contains whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Term(String);

impl Term {
    /// Wraps an already-normalized string. Returns `None` when the string is
    /// empty or contains whitespace.
    pub fn new(s: impl Into<String>) -> Option<Term> {
        let s = s.into();
        if s.is_empty() || s.chars().any(char::is_whitespace) {
            None
        } else {
            Some(Term(s))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl Deref for Term {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Term {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Term {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Analyzer settings. Stopwords are always held in normalized form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "AnalyzerRepr", into = "AnalyzerRepr")]
pub struct AnalyzerConfig {
    lowercase: bool,
    strip_diacritics: bool,
    normalize_alef_ya: bool,
    stopwords: BTreeSet<Term>,
    min_token_length: usize,
}

#[derive(Serialize, Deserialize)]
struct AnalyzerRepr {
    lowercase: bool,
    strip_diacritics: bool,
    normalize_alef_ya: bool,
    #[serde(default)]
    stopwords: Vec<String>,
    #[serde(default = "one")]
    min_token_length: usize,
}

fn one() -> usize {
    1
}

impl From<AnalyzerRepr> for AnalyzerConfig {
    fn from(r: AnalyzerRepr) -> Self {
        AnalyzerConfig::new(r.lowercase, r.strip_diacritics, r.normalize_alef_ya)
            .with_min_token_length(r.min_token_length)
            .with_stopwords(r.stopwords)
    }
}

impl From<AnalyzerConfig> for AnalyzerRepr {
    fn from(c: AnalyzerConfig) -> Self {
        AnalyzerRepr {
            lowercase: c.lowercase,
            strip_diacritics: c.strip_diacritics,
            normalize_alef_ya: c.normalize_alef_ya,
            stopwords: c.stopwords.into_iter().map(Term::into_string).collect(),
            min_token_length: c.min_token_length,
        }
    }
}

impl Default for AnalyzerConfig {
    /// Lowercase, diacritic stripping and alef/ya folding on; no stopwords.
    fn default() -> Self {
        AnalyzerConfig::new(true, true, true)
    }
}

impl AnalyzerConfig {
    pub fn new(lowercase: bool, strip_diacritics: bool, normalize_alef_ya: bool) -> Self {
        AnalyzerConfig {
            lowercase,
            strip_diacritics,
            normalize_alef_ya,
            stopwords: BTreeSet::new(),
            min_token_length: 1,
        }
    }

    /// Every folding off, no stopwords, minimum length 1.
    pub fn identity() -> Self {
        AnalyzerConfig::new(false, false, false)
    }

    /// Replaces the stopword list. Entries are normalized with the current
    /// foldings; entries that normalize to nothing are dropped.
    pub fn with_stopwords<I, S>(mut self, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.stopwords.clear();
        let folding = self.clone();
        self.stopwords = words
            .into_iter()
            .flat_map(|w| {
                tokenize(w.as_ref())
                    .into_iter()
                    .filter_map(|t| normalize(t, &folding))
                    .collect::<Vec<_>>()
            })
            .collect();
        self
    }

    /// Sets the minimum length (in characters) of a kept term. Zero is
    /// treated as one.
    pub fn with_min_token_length(mut self, n: usize) -> Self {
        self.min_token_length = n.max(1);
        // stopwords shorter than the new minimum can no longer match anyway
        self
    }

    pub fn lowercase(&self) -> bool {
        self.lowercase
    }

    pub fn strip_diacritics(&self) -> bool {
        self.strip_diacritics
    }

    pub fn normalize_alef_ya(&self) -> bool {
        self.normalize_alef_ya
    }

    pub fn stopwords(&self) -> &BTreeSet<Term> {
        &self.stopwords
    }

    pub fn min_token_length(&self) -> usize {
        self.min_token_length
    }

    /// Hex SHA-256 of the canonical JSON form of this configuration.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_vec(self).expect("analyzer config serializes");
        hex::encode(Sha256::digest(&json))
    }
}

/// Reads a stopword file: UTF-8, one word per line, blank lines ignored.
pub fn load_stopwords(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_owned)
        .collect())
}

fn is_punct(c: char) -> bool {
    c.is_punctuation()
}

fn trim_punct(s: &str) -> &str {
    s.trim_matches(is_punct)
}

/// Arabic harakat, tanwin, shadda, sukun and related marks, plus the
/// superscript alef.
pub fn is_arabic_diacritic(c: char) -> bool {
    matches!(c, '\u{064B}'..='\u{065F}' | '\u{0670}')
}

fn fold_alef_ya(c: char) -> char {
    match c {
        '\u{0623}' | '\u{0625}' | '\u{0622}' => '\u{0627}',
        '\u{0649}' => '\u{064A}',
        other => other,
    }
}

/// Splits on Unicode whitespace and trims leading/trailing punctuation from
/// each piece. Pieces that become empty are dropped.
pub fn tokenize(text: &str) -> Vec<&str> {
    text.split_whitespace()
        .map(trim_punct)
        .filter(|t| !t.is_empty())
        .collect()
}

/// Applies the configured foldings to one raw token.
///
/// Returns `None` when the result is empty, shorter than the minimum length,
/// or a stopword. Punctuation exposed by diacritic removal is trimmed again
/// so that the output is a fixed point of the pipeline.
pub fn normalize(token: &str, cfg: &AnalyzerConfig) -> Option<Term> {
    if token.chars().any(char::is_whitespace) {
        return None;
    }
    let mut s = if cfg.lowercase {
        token.to_lowercase()
    } else {
        token.to_owned()
    };
    if cfg.strip_diacritics {
        s.retain(|c| !is_arabic_diacritic(c));
    }
    if cfg.normalize_alef_ya {
        s = s.chars().map(fold_alef_ya).collect();
    }
    let s = trim_punct(&s);
    if s.is_empty() || s.chars().count() < cfg.min_token_length || cfg.stopwords.contains(s) {
        return None;
    }
    Some(Term(s.to_owned()))
}

/// `normalize` over `tokenize`, dropping rejected tokens. Duplicates are kept.
pub fn analyze(text: &str, cfg: &AnalyzerConfig) -> Vec<Term> {
    tokenize(text).into_iter().filter_map(|t| normalize(t, cfg)).collect()
}
