//! Joins normalization, classification and polarity into one scored record.

use crate::classify::{self, ClassifierBackend, DEFAULT_THRESHOLD};
use crate::error::{Error, Result};
use crate::ingest::TweetRecord;
use crate::label::{LabelSet, LabelVector};
use crate::normalize::{normalize, tokenize, NormalizedText, SubstitutionTable};
use crate::polarity::{
    self, naive_polarity, polarity_group, vaccine_polarity, PolarityGroup, PolarityLexicon, Stance,
    WeightTable,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredTweet {
    pub record: TweetRecord,
    pub normalized: NormalizedText,
    pub vector: LabelVector,
    pub labels: LabelSet,
    pub vaccine_score: f64,
    /// Lexicon-averaged polarity in `[-1, 1]`.
    pub naive_score: f64,
    pub stance: Stance,
    /// Derived from `naive_score`.
    pub polarity_group: PolarityGroup,
}

impl ScoredTweet {
    /// Builds a record from already-computed scores; `vector` is the label
    /// indicator.
    pub fn from_scores(
        record: TweetRecord,
        normalized: NormalizedText,
        labels: LabelSet,
        vaccine_score: f64,
        naive_score: f64,
    ) -> Self {
        ScoredTweet {
            record,
            normalized,
            vector: LabelVector::indicator(&labels),
            labels,
            vaccine_score,
            naive_score,
            stance: polarity::stance(vaccine_score),
            polarity_group: polarity_group(naive_score),
        }
    }

    /// Country code, or `"ALL"` for records without one.
    pub fn country_key(&self) -> &str {
        self.record.country.as_deref().unwrap_or(UNKNOWN_COUNTRY)
    }
}

/// Bucket for records that carry no country.
pub const UNKNOWN_COUNTRY: &str = "ALL";

pub struct Scorer {
    substitutions: SubstitutionTable,
    backend: Box<dyn ClassifierBackend>,
    tau: f64,
    weights: WeightTable,
    lexicon: PolarityLexicon,
}

impl Scorer {
    /// Bundled tables, the given backend and a 0.5 threshold.
    pub fn new(backend: Box<dyn ClassifierBackend>) -> Self {
        Scorer {
            substitutions: SubstitutionTable::default(),
            backend,
            tau: DEFAULT_THRESHOLD,
            weights: WeightTable::default(),
            lexicon: polarity::bundled_lexicon().clone(),
        }
    }

    pub fn with_substitutions(mut self, table: SubstitutionTable) -> Self {
        self.substitutions = table;
        self
    }

    pub fn with_threshold(mut self, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "threshold {tau} must lie in (0, 1)"
            )));
        }
        self.tau = tau;
        Ok(self)
    }

    pub fn with_weights(mut self, weights: WeightTable) -> Self {
        self.weights = weights;
        self
    }

    pub fn with_lexicon(mut self, lexicon: PolarityLexicon) -> Self {
        self.lexicon = lexicon;
        self
    }

    pub fn backend(&self) -> &dyn ClassifierBackend {
        self.backend.as_ref()
    }

    pub fn threshold(&self) -> f64 {
        self.tau
    }

    pub fn weights(&self) -> &WeightTable {
        &self.weights
    }

    pub fn score(&self, record: &TweetRecord) -> Result<ScoredTweet> {
        let normalized = normalize(&record.text, &self.substitutions);
        let vector = classify::classify(self.backend.as_ref(), &record.id, &normalized)?;
        let labels = classify::threshold(&vector, self.tau)?;
        let vaccine_score = vaccine_polarity(&labels, &self.weights);
        let naive_score = naive_polarity(&tokenize(&normalized), &self.lexicon);
        Ok(ScoredTweet {
            record: record.clone(),
            normalized,
            vector,
            labels,
            vaccine_score,
            naive_score,
            stance: polarity::stance(vaccine_score),
            polarity_group: polarity_group(naive_score),
        })
    }

    pub fn score_all(&self, records: &[TweetRecord]) -> Result<Vec<ScoredTweet>> {
        records.iter().map(|r| self.score(r)).collect()
    }
}
