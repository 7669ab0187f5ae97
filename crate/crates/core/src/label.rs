//! The closed sentiment label space shared by every stage.
//!
//! Labels carry a fixed canonical index (0..=10). Probability vectors and
//! weight tables are laid out in that order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NUM_LABELS: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SentimentLabel {
    Optimistic,
    Thankful,
    Empathetic,
    Pessimistic,
    Anxious,
    Sad,
    Annoyed,
    Denial,
    OfficialReport,
    Surprise,
    Joking,
}

impl SentimentLabel {
    pub const ALL: [SentimentLabel; NUM_LABELS] = [
        SentimentLabel::Optimistic,
        SentimentLabel::Thankful,
        SentimentLabel::Empathetic,
        SentimentLabel::Pessimistic,
        SentimentLabel::Anxious,
        SentimentLabel::Sad,
        SentimentLabel::Annoyed,
        SentimentLabel::Denial,
        SentimentLabel::OfficialReport,
        SentimentLabel::Surprise,
        SentimentLabel::Joking,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    /// Stable snake_case name used in every file format.
    pub fn as_str(self) -> &'static str {
        match self {
            SentimentLabel::Optimistic => "optimistic",
            SentimentLabel::Thankful => "thankful",
            SentimentLabel::Empathetic => "empathetic",
            SentimentLabel::Pessimistic => "pessimistic",
            SentimentLabel::Anxious => "anxious",
            SentimentLabel::Sad => "sad",
            SentimentLabel::Annoyed => "annoyed",
            SentimentLabel::Denial => "denial",
            SentimentLabel::OfficialReport => "official_report",
            SentimentLabel::Surprise => "surprise",
            SentimentLabel::Joking => "joking",
        }
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SentimentLabel {
    type Err = Error;

    /// Accepts the canonical name case-insensitively, ignoring spaces,
    /// hyphens and underscores. `official` is accepted for `official_report`.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, ' ' | '_' | '-'))
            .flat_map(char::to_lowercase)
            .collect();
        let label = match key.as_str() {
            "optimistic" => SentimentLabel::Optimistic,
            "thankful" => SentimentLabel::Thankful,
            "empathetic" => SentimentLabel::Empathetic,
            "pessimistic" => SentimentLabel::Pessimistic,
            "anxious" => SentimentLabel::Anxious,
            "sad" => SentimentLabel::Sad,
            "annoyed" => SentimentLabel::Annoyed,
            "denial" => SentimentLabel::Denial,
            "officialreport" | "official" => SentimentLabel::OfficialReport,
            "surprise" => SentimentLabel::Surprise,
            "joking" => SentimentLabel::Joking,
            _ => return Err(Error::UnknownLabel(s.to_string())),
        };
        Ok(label)
    }
}

/// Per-label probabilities in canonical order, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LabelVector([f64; NUM_LABELS]);

impl LabelVector {
    pub fn zeros() -> Self {
        LabelVector([0.0; NUM_LABELS])
    }

    pub fn new(probs: [f64; NUM_LABELS]) -> Result<Self> {
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(0.0..=1.0).contains(*p))
        {
            return Err(Error::InvalidParameter(format!(
                "probability for {} is {p}, expected a value in [0, 1]",
                SentimentLabel::ALL[i]
            )));
        }
        Ok(LabelVector(probs))
    }

    /// 1.0 for every member of `labels`, 0.0 elsewhere.
    pub fn indicator(labels: &LabelSet) -> Self {
        let mut probs = [0.0; NUM_LABELS];
        for label in labels.iter() {
            probs[label.index()] = 1.0;
        }
        LabelVector(probs)
    }

    pub fn probs(&self) -> &[f64; NUM_LABELS] {
        &self.0
    }

    pub fn get(&self, label: SentimentLabel) -> f64 {
        self.0[label.index()]
    }
}

/// A subset of the label space, stored as a bitmask over canonical indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LabelSet(u16);

impl LabelSet {
    pub fn empty() -> Self {
        LabelSet(0)
    }

    pub fn insert(&mut self, label: SentimentLabel) {
        self.0 |= 1 << label.index();
    }

    pub fn contains(&self, label: SentimentLabel) -> bool {
        self.0 & (1 << label.index()) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(&self, other: &LabelSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(&self, other: &LabelSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(&self, other: &LabelSet) -> LabelSet {
        LabelSet(self.0 | other.0)
    }

    /// Members in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = SentimentLabel> + '_ {
        SentimentLabel::ALL
            .into_iter()
            .filter(move |l| self.contains(*l))
    }

    /// Parses `a;b;c`. An empty string is the empty set.
    pub fn parse_list(s: &str) -> Result<Self> {
        s.split(';')
            .map(str::trim)
            .filter(|part| !part.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl FromIterator<SentimentLabel> for LabelSet {
    fn from_iter<I: IntoIterator<Item = SentimentLabel>>(iter: I) -> Self {
        let mut set = LabelSet::empty();
        for label in iter {
            set.insert(label);
        }
        set
    }
}

impl fmt::Display for LabelSet {
    /// `;`-joined names in canonical order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, label) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            f.write_str(label.as_str())?;
        }
        Ok(())
    }
}
