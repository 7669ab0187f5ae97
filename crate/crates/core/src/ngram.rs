//! Word n-gram counting and top-k ranking, overall and per polarity group.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::normalize::{tokenize, NormalizedText};
use crate::polarity::PolarityGroup;
use crate::scoring::ScoredTweet;

const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NgramCount {
    pub gram: Vec<String>,
    pub count: usize,
}

impl NgramCount {
    /// Words joined by single spaces.
    pub fn joined(&self) -> String {
        self.gram.join(" ")
    }
}

#[derive(Debug, Clone, Default)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    pub fn new<S: Into<String>>(words: impl IntoIterator<Item = S>) -> Self {
        Stopwords(words.into_iter().map(Into::into).collect())
    }

    /// One word per line; blank lines and `#` comments ignored.
    pub fn parse(contents: &str) -> Self {
        Self::new(
            contents
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase),
        )
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let contents = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&contents))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The bundled English function-word list.
pub fn bundled_stopwords() -> Stopwords {
    Stopwords::parse(DEFAULT_STOPWORDS)
}

/// Consecutive windows of length `n`, in positional order.
pub fn ngrams<S>(tokens: &[S], n: usize) -> Result<Vec<&[S]>> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "n-gram length must be at least 1".into(),
        ));
    }
    Ok(tokens.windows(n).collect())
}

/// Mergeable n-gram count map. Merging is commutative and associative, so
/// shards may be counted independently.
#[derive(Debug, Clone, Default)]
pub struct NgramCounter {
    n: usize,
    counts: HashMap<Vec<String>, usize>,
}

impl NgramCounter {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "n-gram length must be at least 1".into(),
            ));
        }
        Ok(NgramCounter {
            n,
            counts: HashMap::new(),
        })
    }

    pub fn add(&mut self, text: &NormalizedText, stopwords: &Stopwords) {
        let tokens = tokenize(text);
        for gram in tokens.windows(self.n) {
            if gram.iter().any(|w| stopwords.contains(w)) {
                continue;
            }
            let key: Vec<String> = gram.iter().map(|w| w.to_string()).collect();
            *self.counts.entry(key).or_default() += 1;
        }
    }

    pub fn merge(&mut self, other: NgramCounter) {
        debug_assert_eq!(self.n, other.n);
        for (gram, count) in other.counts {
            *self.counts.entry(gram).or_default() += count;
        }
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Descending count, ties broken by ascending gram.
    pub fn top(&self, k: usize) -> Vec<NgramCount> {
        let mut ranked: Vec<NgramCount> = self
            .counts
            .iter()
            .map(|(gram, &count)| NgramCount {
                gram: gram.clone(),
                count,
            })
            .collect();
        ranked.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.gram.cmp(&b.gram)));
        ranked.truncate(k);
        ranked
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    Ok(())
}

pub fn top_k(
    corpus: &[ScoredTweet],
    n: usize,
    k: usize,
    stopwords: &Stopwords,
) -> Result<Vec<NgramCount>> {
    top_k_texts(corpus.iter().map(|t| &t.normalized), n, k, stopwords)
}

pub fn top_k_texts<'a>(
    texts: impl IntoIterator<Item = &'a NormalizedText>,
    n: usize,
    k: usize,
    stopwords: &Stopwords,
) -> Result<Vec<NgramCount>> {
    check_k(k)?;
    let mut counter = NgramCounter::new(n)?;
    for text in texts {
        counter.add(text, stopwords);
    }
    Ok(counter.top(k))
}

/// [`top_k`] run separately on each polarity group. All three groups are
/// present in the result, possibly empty.
pub fn top_k_by_group(
    corpus: &[ScoredTweet],
    n: usize,
    k: usize,
    stopwords: &Stopwords,
) -> Result<BTreeMap<PolarityGroup, Vec<NgramCount>>> {
    PolarityGroup::ALL
        .into_iter()
        .map(|group| {
            let texts = corpus
                .iter()
                .filter(|t| t.polarity_group == group)
                .map(|t| &t.normalized);
            top_k_texts(texts, n, k, stopwords).map(|top| (group, top))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::{normalize, SubstitutionTable};

    fn text(s: &str) -> NormalizedText {
        normalize(s, &SubstitutionTable::default())
    }

    #[test]
    fn windows() {
        let toks = ["a", "b", "c"];
        assert_eq!(
            ngrams(&toks, 2).unwrap(),
            [&["a", "b"][..], &["b", "c"][..]]
        );
        assert!(ngrams(&["a"], 3).unwrap().is_empty());
        assert!(ngrams(&toks, 0).is_err());
    }

    #[test]
    fn sliding_window_oracle() {
        let toks = ["a", "b", "c", "d"];
        let mut expected = Vec::new();
        let mut i = 0;
        while i + 3 <= toks.len() {
            expected.push(vec![toks[i], toks[i + 1], toks[i + 2]]);
            i += 1;
        }
        let got: Vec<Vec<&str>> = ngrams(&toks, 3)
            .unwrap()
            .into_iter()
            .map(|g| g.to_vec())
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn repeated_bigram() {
        let docs = [text("covid19 vaccine covid19 vaccine")];
        let top = top_k_texts(docs.iter(), 2, 1, &Stopwords::default()).unwrap();
        assert_eq!(
            top,
            [NgramCount {
                gram: vec!["covid19".into(), "vaccine".into()],
                count: 2
            }]
        );
    }

    #[test]
    fn k_larger_than_distinct() {
        let docs = [text("a b c a")];
        let top = top_k_texts(docs.iter(), 2, 100, &Stopwords::default()).unwrap();
        let grams: Vec<String> = top.iter().map(NgramCount::joined).collect();
        assert_eq!(grams, ["a b", "b c", "c a"]);
    }

    #[test]
    fn all_stopwords() {
        let docs = [text("a b c a")];
        let stop = Stopwords::new(["a", "b", "c"]);
        assert!(top_k_texts(docs.iter(), 1, 5, &stop).unwrap().is_empty());
        assert!(top_k_texts(docs.iter(), 1, 0, &stop).is_err());
    }

    #[test]
    fn stopword_grams_dropped_not_bridged() {
        let docs = [text("vaccine the rollout")];
        let top = top_k_texts(docs.iter(), 2, 10, &bundled_stopwords()).unwrap();
        assert!(top.is_empty());
    }

    #[test]
    fn merge_is_order_free() {
        let stop = Stopwords::default();
        let docs: Vec<NormalizedText> = ["a b a b", "b a c", "c c c a"]
            .iter()
            .map(|s| text(s))
            .collect();
        let mut whole = NgramCounter::new(2).unwrap();
        docs.iter().for_each(|d| whole.add(d, &stop));
        let mut left = NgramCounter::new(2).unwrap();
        left.add(&docs[2], &stop);
        let mut right = NgramCounter::new(2).unwrap();
        right.add(&docs[1], &stop);
        right.add(&docs[0], &stop);
        left.merge(right);
        assert_eq!(left.top(100), whole.top(100));
        assert_eq!(whole.total(), 3 + 2 + 3);
    }
}
