use std::collections::HashMap;
use std::path::Path;

use crate::classify::ClassifierBackend;
use crate::error::{Error, Result};
use crate::label::{LabelSet, LabelVector, NUM_LABELS};
use crate::normalize::NormalizedText;

/// Replays stored predictions keyed by tweet id.
///
/// Accepts either `id,p0,...,p10` rows (canonical label order) or
/// `id,label;label;...` rows, where listed labels get probability 1.0. A
/// leading header row whose first field is `id` is skipped.
#[derive(Debug, Clone, Default)]
pub struct PrecomputedBackend {
    predictions: HashMap<String, LabelVector>,
}

impl PrecomputedBackend {
    pub fn new(predictions: HashMap<String, LabelVector>) -> Self {
        PrecomputedBackend { predictions }
    }

    pub fn from_csv_str(name: &str, contents: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::Fields)
            .from_reader(contents.as_bytes());
        let mut predictions = HashMap::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec?;
            let row = i + 1;
            let id = rec.get(0).unwrap_or("");
            if row == 1 && id.eq_ignore_ascii_case("id") {
                continue;
            }
            if id.is_empty() {
                return Err(Error::table(name, format!("row {row}: empty id")));
            }
            let vector = match rec.len() {
                2 => LabelSet::parse_list(&rec[1]).map(|set| LabelVector::indicator(&set)),
                n if n == NUM_LABELS + 1 => {
                    let mut probs = [0.0; NUM_LABELS];
                    for (slot, field) in probs.iter_mut().zip(rec.iter().skip(1)) {
                        *slot = field.parse().map_err(|_| {
                            Error::table(name, format!("row {row}: bad probability {field:?}"))
                        })?;
                    }
                    LabelVector::new(probs)
                }
                n => {
                    return Err(Error::table(
                        name,
                        format!(
                            "row {row}: expected 2 or {} columns, found {n}",
                            NUM_LABELS + 1
                        ),
                    ))
                }
            }
            .map_err(|e| Error::table(name, format!("row {row}: {e}")))?;
            if predictions.insert(id.to_string(), vector).is_some() {
                return Err(Error::table(
                    name,
                    format!("row {row}: duplicate id {id:?}"),
                ));
            }
        }
        Ok(PrecomputedBackend { predictions })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let contents = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&path.display().to_string(), &contents)
    }

    pub fn len(&self) -> usize {
        self.predictions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predictions.is_empty()
    }
}

impl ClassifierBackend for PrecomputedBackend {
    fn name(&self) -> &str {
        "precomputed"
    }

    fn classify(&self, id: &str, _text: &NormalizedText) -> Result<LabelVector> {
        self.predictions
            .get(id)
            .copied()
            .ok_or_else(|| Error::MissingPrediction(id.to_string()))
    }
}
