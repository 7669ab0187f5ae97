//! Vaccine polarity from assigned sentiment labels, the lexicon-averaged
//! baseline polarity, and the stance / polarity-group partitions.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::label::{LabelSet, SentimentLabel, NUM_LABELS};

const DEFAULT_LEXICON: &str = include_str!("../data/polarity_lexicon.csv");

/// Integer weight per sentiment label plus the divisor applied to the sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    weights: [i32; NUM_LABELS],
    divisor: u32,
}

impl WeightTable {
    pub const DEFAULT_DIVISOR: u32 = 11;

    pub fn new(weights: [i32; NUM_LABELS], divisor: u32) -> Result<Self> {
        if divisor == 0 {
            return Err(Error::InvalidParameter(
                "weight divisor must be positive".into(),
            ));
        }
        Ok(WeightTable { weights, divisor })
    }

    pub fn weight(&self, label: SentimentLabel) -> i32 {
        self.weights[label.index()]
    }

    pub fn weights(&self) -> &[i32; NUM_LABELS] {
        &self.weights
    }

    pub fn divisor(&self) -> u32 {
        self.divisor
    }

    /// Sum of the weights of every label in `labels`.
    pub fn weight_sum(&self, labels: &LabelSet) -> i64 {
        labels.iter().map(|l| i64::from(self.weight(l))).sum()
    }

    /// Parses `label,weight` rows plus one `divisor,<n>` row. Every label
    /// must appear exactly once; the divisor defaults to 11 when omitted.
    pub fn from_csv_str(name: &str, contents: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::Fields)
            .from_reader(contents.as_bytes());
        let mut weights = [None; NUM_LABELS];
        let mut divisor = None;
        for rec in reader.records() {
            let rec = rec?;
            let (Some(key), Some(value)) = (rec.get(0), rec.get(1)) else {
                return Err(Error::table(name, "expected two columns: label,weight"));
            };
            if key.eq_ignore_ascii_case("divisor") {
                let d: u32 = value
                    .parse()
                    .map_err(|_| Error::table(name, format!("bad divisor {value:?}")))?;
                if divisor.replace(d).is_some() {
                    return Err(Error::table(name, "divisor given twice"));
                }
                continue;
            }
            let label: SentimentLabel = key
                .parse()
                .map_err(|e: Error| Error::table(name, e.to_string()))?;
            let w: i32 = value
                .parse()
                .map_err(|_| Error::table(name, format!("bad weight {value:?} for {label}")))?;
            if weights[label.index()].replace(w).is_some() {
                return Err(Error::table(name, format!("{label} given twice")));
            }
        }
        let mut out = [0; NUM_LABELS];
        for (i, w) in weights.iter().enumerate() {
            out[i] = w.ok_or_else(|| {
                Error::table(
                    name,
                    format!("missing weight for {}", SentimentLabel::ALL[i]),
                )
            })?;
        }
        Self::new(out, divisor.unwrap_or(Self::DEFAULT_DIVISOR))
            .map_err(|e| Error::table(name, e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let contents = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&path.display().to_string(), &contents)
    }
}

impl Default for WeightTable {
    fn default() -> Self {
        WeightTable {
            //        opt thk emp pes anx sad ann den off sur jok
            weights: [2, 3, 0, -4, -2, -3, -1, -5, 0, 0, 1],
            divisor: Self::DEFAULT_DIVISOR,
        }
    }
}

/// Sum of label weights divided by the table divisor. The empty set scores 0.
pub fn vaccine_polarity(labels: &LabelSet, table: &WeightTable) -> f64 {
    table.weight_sum(labels) as f64 / f64::from(table.divisor)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stance {
    Anti,
    Neutral,
    Pro,
}

impl Stance {
    pub fn as_str(self) -> &'static str {
        match self {
            Stance::Anti => "anti",
            Stance::Neutral => "neutral",
            Stance::Pro => "pro",
        }
    }
}

impl fmt::Display for Stance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn stance(vaccine_score: f64) -> Stance {
    if vaccine_score > 0.0 {
        Stance::Pro
    } else if vaccine_score < 0.0 {
        Stance::Anti
    } else {
        Stance::Neutral
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarityGroup {
    Negative,
    Neutral,
    Positive,
}

impl PolarityGroup {
    pub const ALL: [PolarityGroup; 3] = [
        PolarityGroup::Negative,
        PolarityGroup::Neutral,
        PolarityGroup::Positive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PolarityGroup::Negative => "negative",
            PolarityGroup::Neutral => "neutral",
            PolarityGroup::Positive => "positive",
        }
    }
}

impl fmt::Display for PolarityGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const NEGATIVE_GROUP_MAX: f64 = -0.2;
pub const POSITIVE_GROUP_MIN: f64 = 0.2;

/// `p <= -0.2` is negative, `p > 0.2` positive, anything between neutral.
pub fn polarity_group(p: f64) -> PolarityGroup {
    if p <= NEGATIVE_GROUP_MAX {
        PolarityGroup::Negative
    } else if p > POSITIVE_GROUP_MIN {
        PolarityGroup::Positive
    } else {
        PolarityGroup::Neutral
    }
}

/// Word → polarity in `[-1, 1]`.
#[derive(Debug, Clone, Default)]
pub struct PolarityLexicon {
    words: HashMap<String, f64>,
}

impl PolarityLexicon {
    pub fn new(words: HashMap<String, f64>) -> Result<Self> {
        if let Some((w, p)) = words.iter().find(|(_, p)| !(-1.0..=1.0).contains(*p)) {
            return Err(Error::InvalidParameter(format!(
                "polarity {p} for {w:?} is outside [-1, 1]"
            )));
        }
        Ok(PolarityLexicon { words })
    }

    pub fn from_csv_str(name: &str, contents: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::Fields)
            .from_reader(contents.as_bytes());
        let mut words = HashMap::new();
        for rec in reader.records() {
            let rec = rec?;
            let (Some(word), Some(value)) = (rec.get(0), rec.get(1)) else {
                return Err(Error::table(name, "expected two columns: word,polarity"));
            };
            let p: f64 = value
                .parse()
                .map_err(|_| Error::table(name, format!("bad polarity {value:?} for {word:?}")))?;
            if words.insert(word.to_lowercase(), p).is_some() {
                return Err(Error::table(name, format!("duplicate word {word:?}")));
            }
        }
        Self::new(words).map_err(|e| Error::table(name, e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let contents = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&path.display().to_string(), &contents)
    }

    pub fn get(&self, word: &str) -> Option<f64> {
        self.words.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// The bundled adjective polarity lexicon (per-word mean over senses).
pub fn bundled_lexicon() -> &'static PolarityLexicon {
    static LEXICON: std::sync::LazyLock<PolarityLexicon> = std::sync::LazyLock::new(|| {
        PolarityLexicon::from_csv_str("polarity_lexicon.csv", DEFAULT_LEXICON)
            .expect("bundled polarity lexicon is valid")
    });
    &LEXICON
}

/// Mean polarity of the tokens found in `lexicon`, 0 when none are found.
pub fn naive_polarity<S: AsRef<str>>(tokens: &[S], lexicon: &PolarityLexicon) -> f64 {
    let (sum, hits) = tokens
        .iter()
        .filter_map(|t| lexicon.get(t.as_ref()))
        .fold((0.0, 0usize), |(s, n), p| (s + p, n + 1));
    if hits == 0 {
        0.0
    } else {
        (sum / hits as f64).clamp(-1.0, 1.0)
    }
}

/// Rounds to `decimals` places, halves away from zero.
pub fn round_half_away(x: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    (x * scale).round() / scale
}

/// Drops digits past `decimals` places (rounds toward zero).
pub fn truncate_toward_zero(x: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    (x * scale).trunc() / scale
}
