#![allow(dead_code)]

use std::sync::LazyLock;

use chrono::{TimeZone, Utc};
use proptest::prelude::*;

use vaxsent::ingest::TweetRecord;
use vaxsent::normalize::{normalize, SubstitutionTable};
use vaxsent::polarity::{bundled_lexicon, naive_polarity, vaccine_polarity, WeightTable};
use vaxsent::scoring::ScoredTweet;
use vaxsent::{LabelSet, SentimentLabel};

static TABLE: LazyLock<SubstitutionTable> = LazyLock::new(SubstitutionTable::default);

pub const COUNTRIES: [Option<&str>; 4] = [Some("AU"), Some("IN"), Some("JP"), None];

const WORDS: &[&str] = &[
    "vaccine", "good", "news", "hoax", "scared", "lol", "the", "and", "sad", "thanks", "stupid",
    "pfizer", "jab", "wow", "update", "never", "great", "bad", "happy", "worried",
];

pub fn record(id: String, month_index: u32, country: Option<&str>, text: String) -> TweetRecord {
    let year = 2020 + (month_index / 12) as i32;
    let month = month_index % 12 + 1;
    TweetRecord {
        id,
        timestamp: Utc
            .with_ymd_and_hms(year, month, 1 + month_index % 27, 12, 0, 0)
            .unwrap(),
        country: country.map(str::to_string),
        text,
    }
}

pub fn arb_text() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(WORDS), 0..12).prop_map(|w| w.join(" "))
}

pub fn arb_record() -> impl Strategy<Value = TweetRecord> {
    (
        0u8..12,
        0u32..30,
        prop::sample::select(&COUNTRIES[..]),
        arb_text(),
    )
        .prop_map(|(id, m, c, text)| record(format!("t{id}"), m, c, text))
}

pub fn arb_labels() -> impl Strategy<Value = LabelSet> {
    prop::collection::vec(prop::sample::select(&SentimentLabel::ALL[..]), 0..5)
        .prop_map(|v| v.into_iter().collect())
}

pub fn scored(record: TweetRecord, labels: LabelSet) -> ScoredTweet {
    let normalized = normalize(&record.text, &TABLE);
    let tokens: Vec<&str> = normalized
        .as_str()
        .split(' ')
        .filter(|t| !t.is_empty())
        .collect();
    let naive = naive_polarity(&tokens, bundled_lexicon());
    let vaccine = vaccine_polarity(&labels, &WeightTable::default());
    ScoredTweet::from_scores(record, normalized, labels, vaccine, naive)
}

pub fn arb_scored() -> impl Strategy<Value = ScoredTweet> {
    (arb_record(), arb_labels()).prop_map(|(r, l)| scored(r, l))
}

/// Scored corpus with unique ids.
pub fn arb_corpus(max: usize) -> impl Strategy<Value = Vec<ScoredTweet>> {
    prop::collection::vec(arb_scored(), 1..max).prop_map(|mut v| {
        for (i, t) in v.iter_mut().enumerate() {
            t.record.id = format!("id{i}");
        }
        v
    })
}
