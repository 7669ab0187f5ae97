//! Tweet text normalization.
//!
//! The pipeline runs in a fixed order: strip URLs, strip @-mentions, drop the
//! `#` from hashtags, replace emoji and symbol sequences, lowercase, expand
//! slang and abbreviations on whole word tokens, then replace every character
//! outside `[a-z0-9]` with a space (apostrophes survive only between two word
//! characters) and collapse whitespace.
//!
//! The output alphabet is `[a-z0-9' ]`. Running the pipeline on its own output
//! is a no-op.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::LazyLock;

use regex::Regex;

use crate::error::{Error, Result};

static URL: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)(?:https?://|www\.)\S*").unwrap());
static MENTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"@\w+").unwrap());
static HASHTAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(^|\W)#(\w+)").unwrap());
static WORD: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[a-z0-9]+(?:'[a-z0-9]+)*").unwrap());

const DEFAULT_TABLE: &str = include_str!("../data/substitutions.csv");

fn is_word_char(c: char) -> bool {
    c.is_ascii_lowercase() || c.is_ascii_digit()
}

/// Maps already-lowercased text into the output alphabet.
fn strip_to_alphabet(lower: &str) -> String {
    let chars: Vec<char> = lower.chars().collect();
    let mut out = String::with_capacity(lower.len());
    let mut pending_space = false;
    for (i, &c) in chars.iter().enumerate() {
        let keep = is_word_char(c)
            || (c == '\''
                && i > 0
                && is_word_char(chars[i - 1])
                && chars.get(i + 1).copied().is_some_and(is_word_char));
        if keep {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(c);
        } else {
            pending_space = true;
        }
    }
    out
}

fn lowercase(s: &str) -> String {
    s.replace('\u{2019}', "'").to_lowercase()
}

/// Lowercases and maps into the output alphabet without any substitutions.
pub(crate) fn canonical_words(s: &str) -> String {
    strip_to_alphabet(&lowercase(s))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    pub pattern: String,
    pub replacement: String,
}

/// Ordered pattern → replacement mappings.
///
/// A pattern made only of word characters (with optional inner apostrophes)
/// is a word pattern, matched case-insensitively against whole tokens. Any
/// other pattern is a symbol pattern (emoji, emoticon) matched exactly
/// anywhere in the text. Replacements are stored already normalized.
#[derive(Debug, Clone)]
pub struct SubstitutionTable {
    entries: Vec<Substitution>,
    words: HashMap<String, String>,
    symbols: Option<(Regex, HashMap<String, String>)>,
}

impl SubstitutionTable {
    pub fn new(pairs: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        let mut entries = Vec::new();
        let mut words = HashMap::new();
        let mut symbols: Vec<(String, String)> = Vec::new();
        for (pattern, replacement) in pairs {
            let pattern = pattern.trim().to_string();
            if pattern.is_empty() {
                return Err(Error::InvalidParameter("empty substitution pattern".into()));
            }
            if pattern.chars().any(char::is_whitespace) {
                return Err(Error::InvalidParameter(format!(
                    "substitution pattern {pattern:?} contains whitespace"
                )));
            }
            let replacement = strip_to_alphabet(&lowercase(&replacement));
            let lower = lowercase(&pattern);
            if WORD.find(&lower).is_some_and(|m| m.as_str() == lower) {
                if words.insert(lower.clone(), replacement.clone()).is_some() {
                    return Err(Error::InvalidParameter(format!(
                        "duplicate substitution pattern {pattern:?}"
                    )));
                }
            } else if lower.chars().all(|c| is_word_char(c) || c == '\'') {
                return Err(Error::InvalidParameter(format!(
                    "substitution pattern {pattern:?} is neither a word nor a symbol sequence"
                )));
            } else {
                if symbols.iter().any(|(p, _)| *p == pattern) {
                    return Err(Error::InvalidParameter(format!(
                        "duplicate substitution pattern {pattern:?}"
                    )));
                }
                symbols.push((pattern.clone(), replacement.clone()));
            }
            entries.push(Substitution {
                pattern,
                replacement,
            });
        }
        // A replacement that contains a word pattern would be rewritten again
        // on a second pass.
        for entry in &entries {
            if let Some(tok) = entry
                .replacement
                .split(' ')
                .find(|t| words.contains_key(*t))
            {
                return Err(Error::InvalidParameter(format!(
                    "replacement for {:?} contains the pattern {tok:?}",
                    entry.pattern
                )));
            }
        }

        let symbols = if symbols.is_empty() {
            None
        } else {
            let mut ordered: Vec<&(String, String)> = symbols.iter().collect();
            // Longest sequence wins when one pattern prefixes another.
            ordered.sort_by_key(|(p, _)| std::cmp::Reverse(p.chars().count()));
            let alternation = ordered
                .iter()
                .map(|(p, _)| regex::escape(p))
                .collect::<Vec<_>>()
                .join("|");
            let re = Regex::new(&alternation)
                .map_err(|e| Error::InvalidParameter(format!("symbol patterns: {e}")))?;
            Some((re, symbols.into_iter().collect()))
        };

        Ok(SubstitutionTable {
            entries,
            words,
            symbols,
        })
    }

    pub fn from_csv_str(name: &str, contents: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::Fields)
            .from_reader(contents.as_bytes());
        let mut pairs = Vec::new();
        for rec in reader.records() {
            let rec = rec?;
            match (rec.get(0), rec.get(1)) {
                (Some(p), Some(r)) => pairs.push((p.to_string(), r.to_string())),
                _ => {
                    return Err(Error::table(
                        name,
                        "expected two columns: pattern,replacement",
                    ))
                }
            }
        }
        Self::new(pairs).map_err(|e| Error::table(name, e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let contents = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&path.display().to_string(), &contents)
    }

    pub fn entries(&self) -> &[Substitution] {
        &self.entries
    }

    pub fn is_word_pattern(&self, token: &str) -> bool {
        self.words.contains_key(token)
    }
}

impl Default for SubstitutionTable {
    /// The bundled slang, abbreviation and emoji table.
    fn default() -> Self {
        Self::from_csv_str("substitutions.csv", DEFAULT_TABLE)
            .expect("bundled substitution table is valid")
    }
}

/// Lowercase tokens over `[a-z0-9']`, single-space separated.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct NormalizedText {
    text: String,
    token_count: usize,
}

impl NormalizedText {
    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn token_count(&self) -> usize {
        self.token_count
    }

    pub fn is_empty(&self) -> bool {
        self.token_count == 0
    }
}

impl fmt::Display for NormalizedText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

pub fn normalize(raw: &str, table: &SubstitutionTable) -> NormalizedText {
    let text = URL.replace_all(raw, " ");
    let text = MENTION.replace_all(&text, " ");
    let text = HASHTAG.replace_all(&text, "$1$2");
    let text = match &table.symbols {
        Some((re, map)) => re.replace_all(&text, |caps: &regex::Captures<'_>| {
            format!(" {} ", map[&caps[0]])
        }),
        None => text,
    };
    let lower = lowercase(&text);
    let expanded = WORD.replace_all(&lower, |caps: &regex::Captures<'_>| {
        let tok = &caps[0];
        table
            .words
            .get(tok)
            .map_or_else(|| tok.to_string(), Clone::clone)
    });
    let text = strip_to_alphabet(&expanded);
    let token_count = if text.is_empty() {
        0
    } else {
        text.split(' ').count()
    };
    NormalizedText { text, token_count }
}

pub fn tokenize(text: &NormalizedText) -> Vec<&str> {
    if text.text.is_empty() {
        Vec::new()
    } else {
        text.text.split(' ').collect()
    }
}
