use std::path::Path;

use crate::classify::ClassifierBackend;
use crate::error::{Error, Result};
use crate::label::{LabelVector, SentimentLabel, NUM_LABELS};
use crate::normalize::{self, NormalizedText};

const DEFAULT_LEXICON: &str = include_str!("../../data/rule_lexicon.csv");

/// Deterministic cue-word classifier. A label scores 1.0 when any of its
/// cues occurs in the text as a contiguous token sequence, 0.0 otherwise.
#[derive(Debug, Clone)]
pub struct RuleLexiconBackend {
    cues: Vec<(Vec<String>, SentimentLabel)>,
}

impl RuleLexiconBackend {
    pub fn new(cues: impl IntoIterator<Item = (String, SentimentLabel)>) -> Result<Self> {
        let cues = cues
            .into_iter()
            .map(|(cue, label)| {
                let words: Vec<String> = normalize::canonical_words(&cue)
                    .split(' ')
                    .filter(|w| !w.is_empty())
                    .map(str::to_string)
                    .collect();
                if words.is_empty() {
                    Err(Error::InvalidParameter(format!("empty cue {cue:?}")))
                } else {
                    Ok((words, label))
                }
            })
            .collect::<Result<_>>()?;
        Ok(RuleLexiconBackend { cues })
    }

    /// Parses a `cue,label` CSV.
    pub fn from_csv_str(name: &str, contents: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::Fields)
            .from_reader(contents.as_bytes());
        let mut cues = Vec::new();
        for rec in reader.records() {
            let rec = rec?;
            let (Some(cue), Some(label)) = (rec.get(0), rec.get(1)) else {
                return Err(Error::table(name, "expected two columns: cue,label"));
            };
            let label = label
                .parse()
                .map_err(|e: Error| Error::table(name, e.to_string()))?;
            cues.push((cue.to_string(), label));
        }
        Self::new(cues).map_err(|e| Error::table(name, e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let contents = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&path.display().to_string(), &contents)
    }

    pub fn len(&self) -> usize {
        self.cues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cues.is_empty()
    }
}

impl Default for RuleLexiconBackend {
    fn default() -> Self {
        Self::from_csv_str("rule_lexicon.csv", DEFAULT_LEXICON)
            .expect("bundled rule lexicon is valid")
    }
}

impl ClassifierBackend for RuleLexiconBackend {
    fn name(&self) -> &str {
        "rule-lexicon"
    }

    fn classify(&self, _id: &str, text: &NormalizedText) -> Result<LabelVector> {
        let tokens = normalize::tokenize(text);
        let mut probs = [0.0; NUM_LABELS];
        for (cue, label) in &self.cues {
            if probs[label.index()] == 0.0
                && tokens
                    .windows(cue.len())
                    .any(|w| w.iter().zip(cue).all(|(a, b)| *a == b))
            {
                probs[label.index()] = 1.0;
            }
        }
        LabelVector::new(probs)
    }
}
