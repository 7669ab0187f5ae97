//! Sentiment analytics for vaccine-related tweets.
//!
//! Raw tweets are normalized ([`normalize`]), given 11 per-sentiment
//! probabilities by a pluggable backend ([`classify`]), thresholded into a
//! label set and scored for vaccine polarity ([`polarity`]). Scored corpora
//! feed n-gram ranking ([`ngram`]) and per-country monthly statistics
//! ([`aggregate`]); [`pipeline`] ties the stages to files.

pub mod aggregate;
pub mod classify;
pub mod error;
pub mod ingest;
pub mod label;
pub mod ngram;
pub mod normalize;
pub mod pipeline;
pub mod polarity;
pub mod scoring;

pub use error::{Error, Result};
pub use label::{LabelSet, LabelVector, SentimentLabel, NUM_LABELS};
pub use scoring::{ScoredTweet, Scorer};
