//! Per-country, per-month statistics over a scored corpus.
//!
//! Every statistic is a fold over the corpus that does not depend on record
//! order: floating-point sums are taken over values sorted first.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::{CaseSeries, YearMonth};
use crate::label::{LabelSet, SentimentLabel, NUM_LABELS};
use crate::scoring::ScoredTweet;

/// Tweet count per label, canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct LabelCounts([usize; NUM_LABELS]);

impl LabelCounts {
    pub fn add(&mut self, labels: &LabelSet) {
        for label in labels.iter() {
            self.0[label.index()] += 1;
        }
    }

    pub fn get(&self, label: SentimentLabel) -> usize {
        self.0[label.index()]
    }

    pub fn as_array(&self) -> &[usize; NUM_LABELS] {
        &self.0
    }
}

/// Tweets bucketed by how many labels they carry: 0, 1, 2, 3 or more.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct LabelHistogram([usize; 4]);

impl LabelHistogram {
    pub const BUCKETS: [&'static str; 4] = ["0", "1", "2", "3+"];

    pub fn add(&mut self, labels: &LabelSet) {
        self.0[labels.len().min(3)] += 1;
    }

    pub fn counts(&self) -> &[usize; 4] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonthlyAggregate {
    pub country: String,
    pub month: YearMonth,
    pub tweet_count: usize,
    /// `None` only when `tweet_count` is zero.
    pub mean_vaccine_score: Option<f64>,
    pub mean_naive_score: Option<f64>,
    pub per_label_counts: LabelCounts,
    pub label_count_histogram: LabelHistogram,
    pub new_cases: Option<u64>,
}

/// Arithmetic mean, summed in ascending order.
pub(crate) fn mean(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    Some(values.iter().sum::<f64>() / values.len() as f64)
}

/// One aggregate per (country, month) holding at least one tweet, ordered by
/// country then month. Records without a country fall under `"ALL"`.
pub fn aggregate_monthly(
    corpus: &[ScoredTweet],
    cases: Option<&[CaseSeries]>,
) -> Vec<MonthlyAggregate> {
    let mut buckets: BTreeMap<(&str, YearMonth), Vec<&ScoredTweet>> = BTreeMap::new();
    for tweet in corpus {
        buckets
            .entry((tweet.country_key(), tweet.record.month()))
            .or_default()
            .push(tweet);
    }
    buckets
        .into_iter()
        .map(|((country, month), tweets)| {
            let mut per_label_counts = LabelCounts::default();
            let mut label_count_histogram = LabelHistogram::default();
            for t in &tweets {
                per_label_counts.add(&t.labels);
                label_count_histogram.add(&t.labels);
            }
            let mut vaccine: Vec<f64> = tweets.iter().map(|t| t.vaccine_score).collect();
            let mut naive: Vec<f64> = tweets.iter().map(|t| t.naive_score).collect();
            let new_cases = cases.and_then(|series| {
                series
                    .iter()
                    .find(|s| s.country == country)
                    .and_then(|s| s.get(month))
            });
            MonthlyAggregate {
                country: country.to_string(),
                month,
                tweet_count: tweets.len(),
                mean_vaccine_score: mean(&mut vaccine),
                mean_naive_score: mean(&mut naive),
                per_label_counts,
                label_count_histogram,
                new_cases,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LabelCountDistribution {
    pub histogram: LabelHistogram,
}

impl LabelCountDistribution {
    /// Fractions for the 0, 1, 2 and 3+ buckets.
    pub fn fractions(&self) -> [f64; 4] {
        let total = self.histogram.total() as f64;
        self.histogram.counts().map(|c| c as f64 / total)
    }
}

/// Share of tweets carrying 0, 1, 2 and 3+ labels across the whole corpus.
pub fn label_count_distribution(corpus: &[ScoredTweet]) -> Result<LabelCountDistribution> {
    if corpus.is_empty() {
        return Err(Error::NoData("label-count distribution".into()));
    }
    let mut histogram = LabelHistogram::default();
    for t in corpus {
        histogram.add(&t.labels);
    }
    Ok(LabelCountDistribution { histogram })
}

/// Each tweet counts once toward every label it carries.
pub fn sentiment_totals(corpus: &[ScoredTweet]) -> LabelCounts {
    let mut counts = LabelCounts::default();
    for t in corpus {
        counts.add(&t.labels);
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreKind {
    Vaccine,
    Naive,
}

impl ScoreKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScoreKind::Vaccine => "vaccine",
            ScoreKind::Naive => "naive",
        }
    }

    pub fn of(self, tweet: &ScoredTweet) -> f64 {
        match self {
            ScoreKind::Vaccine => tweet.vaccine_score,
            ScoreKind::Naive => tweet.naive_score,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoreStats {
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

/// Quantile of ascending `sorted` by linear interpolation between closest
/// ranks: position `(n - 1) * p`.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = (sorted.len() - 1) as f64 * p;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    match sorted.get(lo + 1) {
        Some(&hi) if frac > 0.0 => sorted[lo] + frac * (hi - sorted[lo]),
        _ => sorted[lo],
    }
}

/// Five-number summary plus mean of one score over a country's tweets.
pub fn score_distribution_stats(
    corpus: &[ScoredTweet],
    country: &str,
    kind: ScoreKind,
) -> Result<ScoreStats> {
    let mut values: Vec<f64> = corpus
        .iter()
        .filter(|t| t.country_key() == country)
        .map(|t| kind.of(t))
        .collect();
    if values.is_empty() {
        return Err(Error::NoData(format!("country {country}")));
    }
    values.sort_by(f64::total_cmp);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(ScoreStats {
        count: values.len(),
        min: values[0],
        q1: quantile(&values, 0.25),
        median: quantile(&values, 0.5),
        q3: quantile(&values, 0.75),
        max: values[values.len() - 1],
        mean,
    })
}

/// Per country, the fraction of its tweets carrying each label.
pub fn sentiment_share_by_country(corpus: &[ScoredTweet]) -> BTreeMap<String, [f64; NUM_LABELS]> {
    let mut tallies: BTreeMap<&str, (usize, LabelCounts)> = BTreeMap::new();
    for t in corpus {
        let entry = tallies.entry(t.country_key()).or_default();
        entry.0 += 1;
        entry.1.add(&t.labels);
    }
    tallies
        .into_iter()
        .map(|(country, (total, counts))| {
            let shares = counts.as_array().map(|c| c as f64 / total as f64);
            (country.to_string(), shares)
        })
        .collect()
}

/// Per-month label tallies for one country.
pub fn monthly_sentiment_trend(
    corpus: &[ScoredTweet],
    country: &str,
) -> BTreeMap<YearMonth, LabelCounts> {
    let mut trend: BTreeMap<YearMonth, LabelCounts> = BTreeMap::new();
    for t in corpus.iter().filter(|t| t.country_key() == country) {
        trend.entry(t.record.month()).or_default().add(&t.labels);
    }
    trend
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_timestamp, TweetRecord};
    use crate::normalize::NormalizedText;
    use SentimentLabel::*;

    fn tweet(
        id: usize,
        month: &str,
        country: Option<&str>,
        labels: &[SentimentLabel],
        score: f64,
    ) -> ScoredTweet {
        ScoredTweet::from_scores(
            TweetRecord {
                id: id.to_string(),
                timestamp: parse_timestamp(&format!("{month}-15T08:00:00Z")).unwrap(),
                country: country.map(str::to_string),
                text: "x".into(),
            },
            NormalizedText::default(),
            labels.iter().copied().collect(),
            score,
            0.0,
        )
    }

    #[test]
    fn singleton_month() {
        let corpus = [tweet(
            1,
            "2021-02",
            Some("IN"),
            &[Annoyed, Denial],
            -6.0 / 11.0,
        )];
        let aggs = aggregate_monthly(&corpus, None);
        assert_eq!(aggs.len(), 1);
        assert_eq!(aggs[0].country, "IN");
        assert_eq!(aggs[0].month.to_string(), "2021-02");
        assert_eq!(aggs[0].mean_vaccine_score, Some(-6.0 / 11.0));
        assert_eq!(aggs[0].label_count_histogram.counts(), &[0, 0, 1, 0]);
        assert_eq!(aggs[0].new_cases, None);
    }

    #[test]
    fn empty_corpus() {
        assert!(aggregate_monthly(&[], None).is_empty());
        assert!(label_count_distribution(&[]).is_err());
        assert_eq!(sentiment_totals(&[]), LabelCounts::default());
        assert!(sentiment_share_by_country(&[]).is_empty());
    }

    #[test]
    fn three_tweet_mean() {
        let corpus = [
            tweet(1, "2020-06", Some("AU"), &[], 0.0),
            tweet(2, "2020-06", Some("AU"), &[Empathetic], 0.0),
            tweet(3, "2020-06", Some("AU"), &[Thankful], 3.0 / 11.0),
        ];
        let aggs = aggregate_monthly(&corpus, None);
        assert!((aggs[0].mean_vaccine_score.unwrap() - 1.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_country_bucket_and_cases() {
        let corpus = [
            tweet(1, "2020-06", None, &[], 0.0),
            tweet(2, "2020-06", Some("AU"), &[], 0.0),
        ];
        let cases = [CaseSeries {
            country: "AU".into(),
            points: vec![("2020-06".parse().unwrap(), 42)],
        }];
        let aggs = aggregate_monthly(&corpus, Some(&cases));
        assert_eq!(aggs[0].country, "ALL");
        assert_eq!(aggs[0].new_cases, None);
        assert_eq!(aggs[1].new_cases, Some(42));
    }

    #[test]
    fn cardinality_histogram() {
        let sets: [&[SentimentLabel]; 10] = [
            &[],
            &[Sad],
            &[Joking],
            &[Optimistic],
            &[Denial],
            &[Sad, Annoyed],
            &[Joking, Surprise],
            &[Optimistic, Thankful],
            &[Anxious, OfficialReport],
            &[Joking, Pessimistic, Anxious],
        ];
        let corpus: Vec<_> = sets
            .iter()
            .enumerate()
            .map(|(i, s)| tweet(i, "2020-05", Some("BR"), s, 0.0))
            .collect();
        let d = label_count_distribution(&corpus).unwrap();
        assert_eq!(d.fractions(), [0.1, 0.4, 0.4, 0.1]);

        let singles: Vec<_> = (0..4)
            .map(|i| tweet(i, "2020-05", None, &[Sad], 0.0))
            .collect();
        assert_eq!(
            label_count_distribution(&singles).unwrap().fractions(),
            [0.0, 1.0, 0.0, 0.0]
        );
    }

    #[test]
    fn totals_single_tweet() {
        let t = sentiment_totals(&[tweet(1, "2020-05", None, &[Annoyed, Anxious], 0.0)]);
        for label in SentimentLabel::ALL {
            let expected = usize::from(matches!(label, Annoyed | Anxious));
            assert_eq!(t.get(label), expected);
        }
    }

    #[test]
    fn stats_small_cases() {
        let corpus = [
            tweet(1, "2020-05", Some("JP"), &[], -1.0 / 11.0),
            tweet(2, "2020-05", Some("JP"), &[], 1.0 / 11.0),
            tweet(3, "2020-06", Some("JP"), &[], 0.0),
        ];
        let s = score_distribution_stats(&corpus, "JP", ScoreKind::Vaccine).unwrap();
        assert_eq!(s.median, 0.0);
        assert_eq!(s.min, -1.0 / 11.0);
        let one = score_distribution_stats(&corpus[..1], "JP", ScoreKind::Vaccine).unwrap();
        assert!([one.min, one.q1, one.median, one.q3, one.max]
            .iter()
            .all(|v| *v == -1.0 / 11.0));
        assert!(score_distribution_stats(&corpus, "AU", ScoreKind::Vaccine).is_err());
    }

    #[test]
    fn shares_and_trend() {
        let corpus = [
            tweet(1, "2020-05", Some("ID"), &[Sad, Joking], 0.0),
            tweet(2, "2020-05", Some("ID"), &[Sad], 0.0),
            tweet(3, "2020-07", Some("ID"), &[], 0.0),
            tweet(4, "2020-07", Some("IN"), &[Joking], 0.0),
        ];
        let shares = sentiment_share_by_country(&corpus);
        assert_eq!(shares["ID"][Sad.index()], 2.0 / 3.0);
        assert_eq!(shares["ID"][Joking.index()], 1.0 / 3.0);
        assert_eq!(shares["IN"][Joking.index()], 1.0);
        let trend = monthly_sentiment_trend(&corpus, "ID");
        assert_eq!(trend.len(), 2);
        assert_eq!(trend[&"2020-05".parse().unwrap()].get(Sad), 2);
        assert_eq!(trend[&"2020-07".parse().unwrap()], LabelCounts::default());
    }
}
