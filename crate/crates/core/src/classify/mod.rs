//! Multi-label sentiment classification behind interchangeable backends.
//!
//! Every backend maps a normalized tweet to an 11-wide [`LabelVector`];
//! [`threshold`] turns a vector into a [`LabelSet`] with independent
//! per-label decisions.

use crate::error::{Error, Result};
use crate::label::{LabelSet, LabelVector, SentimentLabel};
use crate::normalize::NormalizedText;

#[cfg(feature = "onnx")]
mod exported;
mod precomputed;
mod rules;

#[cfg(feature = "onnx")]
pub use exported::{ExportedModelBackend, ModelManifest};
pub use precomputed::PrecomputedBackend;
pub use rules::RuleLexiconBackend;

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// A sentiment classifier. Implementations are immutable once built and
/// may be shared across threads.
pub trait ClassifierBackend: Send + Sync {
    fn name(&self) -> &str;

    /// `id` is the tweet identifier; backends that replay stored
    /// predictions look it up, the others ignore it.
    fn classify(&self, id: &str, text: &NormalizedText) -> Result<LabelVector>;
}

/// Runs `backend` and checks the probability range of what it returns.
pub fn classify(
    backend: &dyn ClassifierBackend,
    id: &str,
    text: &NormalizedText,
) -> Result<LabelVector> {
    let v = backend.classify(id, text)?;
    LabelVector::new(*v.probs())
}

/// Label `i` is assigned iff `probs[i] >= tau`.
pub fn threshold(v: &LabelVector, tau: f64) -> Result<LabelSet> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold {tau} must lie in (0, 1)"
        )));
    }
    Ok(SentimentLabel::ALL
        .into_iter()
        .filter(|l| v.get(*l) >= tau)
        .collect())
}
