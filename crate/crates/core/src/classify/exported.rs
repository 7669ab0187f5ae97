//! Local inference over an exported fine-tuned encoder.
//!
//! A model directory holds `manifest.json`, an ONNX graph and a
//! `tokenizer.json`. The graph takes `input_ids` and `attention_mask` (and
//! `token_type_ids` when the manifest says so), all `i64` of shape
//! `[1, seq]`, and returns one `[1, n_labels]` tensor. The manifest lists the
//! 10 or 11 output labels in canonical order; labels the model does not emit
//! score 0.0.
//!
//! The optimized plan is immutable and every call spawns its own execution
//! state, so one backend may be shared across threads.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use tokenizers::{Tokenizer, TruncationParams};
use tract_onnx::prelude::*;

use crate::classify::ClassifierBackend;
use crate::error::{Error, Result};
use crate::label::{LabelVector, SentimentLabel, NUM_LABELS};
use crate::normalize::NormalizedText;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputActivation {
    /// The graph already emits probabilities.
    #[default]
    None,
    /// The graph emits logits; apply a per-label sigmoid.
    Sigmoid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelManifest {
    pub model: PathBuf,
    pub tokenizer: PathBuf,
    pub labels: Vec<String>,
    #[serde(default = "default_max_length")]
    pub max_length: usize,
    #[serde(default)]
    pub output_activation: OutputActivation,
    #[serde(default)]
    pub uses_token_type_ids: bool,
    #[serde(default)]
    pub pad_token_id: u32,
}

fn default_max_length() -> usize {
    128
}

impl ModelManifest {
    /// Canonical indices of the model outputs, checked to be strictly
    /// increasing.
    fn output_slots(&self) -> Result<Vec<usize>> {
        if !(NUM_LABELS - 1..=NUM_LABELS).contains(&self.labels.len()) {
            return Err(Error::BackendUnavailable(format!(
                "manifest lists {} labels, expected 10 or 11",
                self.labels.len()
            )));
        }
        let slots = self
            .labels
            .iter()
            .map(|l| l.parse::<SentimentLabel>().map(SentimentLabel::index))
            .collect::<Result<Vec<_>>>()?;
        if slots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BackendUnavailable(
                "manifest labels are not in canonical order".into(),
            ));
        }
        Ok(slots)
    }
}

pub struct ExportedModelBackend {
    plan: Arc<TypedSimplePlan>,
    tokenizer: Tokenizer,
    manifest: ModelManifest,
    slots: Vec<usize>,
}

fn unavailable(what: &str, path: &Path, e: impl std::fmt::Display) -> Error {
    Error::BackendUnavailable(format!("{what} {}: {e}", path.display()))
}

impl ExportedModelBackend {
    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let manifest_path = dir.join(MANIFEST_FILE);
        let raw = std::fs::read_to_string(&manifest_path)
            .map_err(|e| unavailable("cannot read manifest", &manifest_path, e))?;
        let manifest: ModelManifest = serde_json::from_str(&raw)
            .map_err(|e| unavailable("invalid manifest", &manifest_path, e))?;
        let slots = manifest.output_slots()?;

        let tokenizer_path = dir.join(&manifest.tokenizer);
        let mut tokenizer = Tokenizer::from_file(&tokenizer_path)
            .map_err(|e| unavailable("cannot load tokenizer", &tokenizer_path, e))?;
        tokenizer
            .with_truncation(Some(TruncationParams {
                max_length: manifest.max_length,
                ..Default::default()
            }))
            .map_err(|e| unavailable("cannot configure tokenizer", &tokenizer_path, e))?;

        let model_path = dir.join(&manifest.model);
        if !model_path.is_file() {
            return Err(unavailable("missing model", &model_path, "not a file"));
        }
        let plan = tract_onnx::onnx()
            .model_for_path(&model_path)
            .and_then(|m| m.into_optimized())
            .and_then(|m| m.into_runnable())
            .map_err(|e| unavailable("cannot load model", &model_path, e))?;

        Ok(ExportedModelBackend {
            plan,
            tokenizer,
            manifest,
            slots,
        })
    }

    pub fn manifest(&self) -> &ModelManifest {
        &self.manifest
    }

    fn run(&self, text: &str) -> Result<Vec<f32>> {
        let encoding = self
            .tokenizer
            .encode(text, true)
            .map_err(|e| Error::Inference(format!("tokenization: {e}")))?;
        let (ids, mask): (Vec<i64>, Vec<i64>) = if encoding.get_ids().is_empty() {
            // A zero-length sequence is not a valid graph input; feed one
            // masked padding token instead.
            (vec![i64::from(self.manifest.pad_token_id)], vec![0])
        } else {
            (
                encoding.get_ids().iter().map(|&i| i64::from(i)).collect(),
                encoding
                    .get_attention_mask()
                    .iter()
                    .map(|&m| i64::from(m))
                    .collect(),
            )
        };
        let len = ids.len();
        let as_tensor = |values: Vec<i64>| -> Result<TValue> {
            tract_ndarray::Array2::from_shape_vec((1, len), values)
                .map(|a| a.into_tensor().into_tvalue())
                .map_err(|e| Error::Inference(e.to_string()))
        };
        let mut inputs: TVec<TValue> = tvec!(as_tensor(ids)?, as_tensor(mask)?);
        if self.manifest.uses_token_type_ids {
            inputs.push(as_tensor(vec![0; len])?);
        }
        let outputs = self
            .plan
            .run(inputs)
            .map_err(|e| Error::Inference(e.to_string()))?;
        let view = outputs[0]
            .to_plain_array_view::<f32>()
            .map_err(|e| Error::Inference(e.to_string()))?;
        Ok(view.iter().copied().collect())
    }
}

impl ClassifierBackend for ExportedModelBackend {
    fn name(&self) -> &str {
        "exported-model"
    }

    fn classify(&self, _id: &str, text: &NormalizedText) -> Result<LabelVector> {
        let raw = self.run(text.as_str())?;
        if raw.len() != self.slots.len() {
            return Err(Error::Inference(format!(
                "model emitted {} values for {} labels",
                raw.len(),
                self.slots.len()
            )));
        }
        let mut probs = [0.0; NUM_LABELS];
        for (&slot, &value) in self.slots.iter().zip(&raw) {
            let value = f64::from(value);
            probs[slot] = match self.manifest.output_activation {
                OutputActivation::None => value,
                OutputActivation::Sigmoid => 1.0 / (1.0 + (-value).exp()),
            };
        }
        LabelVector::new(probs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest(labels: &[&str]) -> ModelManifest {
        ModelManifest {
            model: "m.onnx".into(),
            tokenizer: "t.json".into(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
            max_length: 8,
            output_activation: OutputActivation::None,
            uses_token_type_ids: false,
            pad_token_id: 0,
        }
    }

    #[test]
    fn ten_label_manifest_skips_official() {
        let labels: Vec<&str> = SentimentLabel::ALL
            .iter()
            .filter(|l| **l != SentimentLabel::OfficialReport)
            .map(|l| l.as_str())
            .collect();
        let slots = manifest(&labels).output_slots().unwrap();
        assert_eq!(slots, [0, 1, 2, 3, 4, 5, 6, 7, 9, 10]);
    }

    #[test]
    fn manifest_order_and_width_checked() {
        assert!(manifest(&["sad", "optimistic"]).output_slots().is_err());
        let mut all: Vec<&str> = SentimentLabel::ALL.iter().map(|l| l.as_str()).collect();
        all.swap(0, 1);
        assert!(manifest(&all).output_slots().is_err());
    }

    #[test]
    fn missing_directory_is_unavailable() {
        assert!(matches!(
            ExportedModelBackend::load("/nonexistent/model"),
            Err(Error::BackendUnavailable(_))
        ));
    }
}
