//! File-to-file orchestration: load, score, aggregate, rank, and record a
//! manifest of what was read and written.
//!
//! Identical configuration and inputs produce byte-identical outputs. No
//! stage reads the clock or a random source.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::aggregate::{self, ScoreKind};
use crate::classify::{self, ClassifierBackend, PrecomputedBackend, RuleLexiconBackend};
use crate::error::{Error, Result};
use crate::ingest::{self, CaseSeries, TweetFormat, TweetRecord, YearMonth};
use crate::label::SentimentLabel;
use crate::ngram::{self, Stopwords};
use crate::normalize::SubstitutionTable;
use crate::polarity::{self, PolarityLexicon, WeightTable};
use crate::scoring::{ScoredTweet, Scorer};

pub const TOOL_NAME: &str = "vaxsent";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BackendKind {
    #[default]
    RuleLexicon,
    Precomputed,
    ExportedModel,
}

impl BackendKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BackendKind::RuleLexicon => "rule-lexicon",
            BackendKind::Precomputed => "precomputed",
            BackendKind::ExportedModel => "exported-model",
        }
    }
}

impl std::str::FromStr for BackendKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rule-lexicon" | "rules" => Ok(BackendKind::RuleLexicon),
            "precomputed" => Ok(BackendKind::Precomputed),
            "exported-model" | "model" => Ok(BackendKind::ExportedModel),
            other => Err(Error::Config(format!("unknown backend {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonthRange {
    /// Inclusive, `YYYY-MM`.
    pub start: YearMonth,
    /// Exclusive, `YYYY-MM`.
    pub end: YearMonth,
}

/// Every input and knob of a run. Loaded from TOML; relative paths resolve
/// against the config file's directory. Optional table paths fall back to
/// the bundled tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub corpus: Vec<PathBuf>,
    /// `jsonl` or `csv`; inferred per file from the extension when absent.
    pub corpus_format: Option<String>,
    pub substitutions: Option<PathBuf>,
    pub backend: BackendKind,
    pub rule_lexicon: Option<PathBuf>,
    pub precomputed_labels: Option<PathBuf>,
    pub model_dir: Option<PathBuf>,
    pub threshold: f64,
    pub weights: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub cases: Option<PathBuf>,
    /// ISO alpha-2 codes; empty keeps every record.
    pub countries: Vec<String>,
    pub date_range: Option<MonthRange>,
    pub output_dir: PathBuf,
    pub ngram_sizes: Vec<usize>,
    pub top_k: usize,
    /// Reserved for sampling utilities; no current stage reads it.
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            corpus: Vec::new(),
            corpus_format: None,
            substitutions: None,
            backend: BackendKind::RuleLexicon,
            rule_lexicon: None,
            precomputed_labels: None,
            model_dir: None,
            threshold: classify::DEFAULT_THRESHOLD,
            weights: None,
            lexicon: None,
            stopwords: None,
            cases: None,
            countries: Vec::new(),
            date_range: None,
            output_dir: PathBuf::from("out"),
            ngram_sizes: vec![2, 3],
            top_k: 20,
            seed: 0,
        }
    }
}

impl PipelineConfig {
    pub fn from_toml_str(contents: &str) -> Result<Self> {
        toml::from_str(contents).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a TOML config and rebases its relative paths onto the file's
    /// directory.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let contents = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml_str(&contents)?;
        if let Some(base) = path.parent() {
            config.rebase(base);
        }
        Ok(config)
    }

    fn rebase(&mut self, base: &Path) {
        let join = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        self.corpus.iter_mut().for_each(join);
        for p in [
            &mut self.substitutions,
            &mut self.rule_lexicon,
            &mut self.precomputed_labels,
            &mut self.model_dir,
            &mut self.weights,
            &mut self.lexicon,
            &mut self.stopwords,
            &mut self.cases,
        ]
        .into_iter()
        .flatten()
        {
            join(p);
        }
        join(&mut self.output_dir);
    }

    /// Checks parameters and that every referenced input exists.
    pub fn validate(&self) -> Result<()> {
        if self.corpus.is_empty() {
            return Err(Error::Config("no corpus file given".into()));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::Config(format!(
                "threshold {} must lie in (0, 1)",
                self.threshold
            )));
        }
        if let Some(fmt) = &self.corpus_format {
            fmt.parse::<TweetFormat>()
                .map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.top_k == 0 {
            return Err(Error::Config("top_k must be at least 1".into()));
        }
        if self.ngram_sizes.contains(&0) {
            return Err(Error::Config("n-gram sizes must be at least 1".into()));
        }
        if let Some(range) = &self.date_range {
            if range.start >= range.end {
                return Err(Error::Config(format!(
                    "date range start {} is not before end {}",
                    range.start, range.end
                )));
            }
        }
        for c in &self.countries {
            if c.len() != 2 || !c.chars().all(|ch| ch.is_ascii_alphabetic()) {
                return Err(Error::Config(format!(
                    "country {c:?} is not an alpha-2 code"
                )));
            }
        }
        match self.backend {
            BackendKind::RuleLexicon => {}
            BackendKind::Precomputed if self.precomputed_labels.is_none() => {
                return Err(Error::Config(
                    "precomputed backend needs precomputed_labels".into(),
                ))
            }
            BackendKind::ExportedModel if self.model_dir.is_none() => {
                return Err(Error::Config(
                    "exported-model backend needs model_dir".into(),
                ))
            }
            _ => {}
        }
        for path in self.input_paths() {
            if !path.exists() {
                return Err(Error::Config(format!("{} does not exist", path.display())));
            }
        }
        Ok(())
    }

    /// Every input file or directory the run reads, corpus first.
    pub fn input_paths(&self) -> Vec<&Path> {
        let mut paths: Vec<&Path> = self.corpus.iter().map(PathBuf::as_path).collect();
        let backend_path = match self.backend {
            BackendKind::RuleLexicon => self.rule_lexicon.as_deref(),
            BackendKind::Precomputed => self.precomputed_labels.as_deref(),
            BackendKind::ExportedModel => self.model_dir.as_deref(),
        };
        paths.extend(
            [
                self.substitutions.as_deref(),
                backend_path,
                self.weights.as_deref(),
                self.lexicon.as_deref(),
                self.stopwords.as_deref(),
                self.cases.as_deref(),
            ]
            .into_iter()
            .flatten(),
        );
        paths
    }
}

/// Pipeline stage, used to pick the process exit code on failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Ingest,
    Classify,
    Aggregate,
}

impl Stage {
    pub fn exit_code(self) -> i32 {
        match self {
            Stage::Config => 2,
            Stage::Ingest => 3,
            Stage::Classify => 4,
            Stage::Aggregate => 5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Config => "config",
            Stage::Ingest => "ingest",
            Stage::Classify => "classify",
            Stage::Aggregate => "aggregate",
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{} stage failed: {source}", stage.as_str())]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, PipelineError>;
}

impl<T> AtStage<T> for Result<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, PipelineError> {
        self.map_err(|source| PipelineError { stage, source })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Score,
    Aggregate,
    Ngrams,
    Report,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Score => "score",
            Command::Aggregate => "aggregate",
            Command::Ngrams => "ngrams",
            Command::Report => "report",
        }
    }

    fn aggregates(self) -> bool {
        matches!(self, Command::Aggregate | Command::Report)
    }

    fn ngrams(self) -> bool {
        matches!(self, Command::Ngrams | Command::Report)
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct IngestSummary {
    pub records: usize,
    pub rejected: usize,
    pub duplicates: usize,
    pub filtered_out: usize,
    pub case_rows_rejected: usize,
}

/// In-memory result of loading and scoring.
pub struct ScoredCorpus {
    pub tweets: Vec<ScoredTweet>,
    pub cases: Option<Vec<CaseSeries>>,
    pub ingest: IngestSummary,
    pub backend: String,
}

fn build_backend(config: &PipelineConfig) -> Result<Box<dyn ClassifierBackend>> {
    Ok(match config.backend {
        BackendKind::RuleLexicon => match &config.rule_lexicon {
            Some(p) => Box::new(RuleLexiconBackend::from_path(p)?),
            None => Box::new(RuleLexiconBackend::default()),
        },
        BackendKind::Precomputed => {
            let path = config
                .precomputed_labels
                .as_ref()
                .ok_or_else(|| Error::BackendUnavailable("no precomputed label file".into()))?;
            Box::new(PrecomputedBackend::from_path(path).map_err(|e| match e {
                Error::Io { .. } => Error::BackendUnavailable(e.to_string()),
                other => other,
            })?)
        }
        BackendKind::ExportedModel => exported_backend(config)?,
    })
}

#[cfg(feature = "onnx")]
fn exported_backend(config: &PipelineConfig) -> Result<Box<dyn ClassifierBackend>> {
    let dir = config
        .model_dir
        .as_ref()
        .ok_or_else(|| Error::BackendUnavailable("no model directory".into()))?;
    Ok(Box::new(classify::ExportedModelBackend::load(dir)?))
}

#[cfg(not(feature = "onnx"))]
fn exported_backend(_config: &PipelineConfig) -> Result<Box<dyn ClassifierBackend>> {
    Err(Error::BackendUnavailable(
        "built without the `onnx` feature".into(),
    ))
}

/// Builds the scorer described by `config`.
pub fn build_scorer(config: &PipelineConfig) -> Result<Scorer> {
    let mut scorer = Scorer::new(build_backend(config)?).with_threshold(config.threshold)?;
    if let Some(p) = &config.substitutions {
        scorer = scorer.with_substitutions(SubstitutionTable::from_path(p)?);
    }
    if let Some(p) = &config.weights {
        scorer = scorer.with_weights(WeightTable::from_path(p)?);
    }
    if let Some(p) = &config.lexicon {
        scorer = scorer.with_lexicon(PolarityLexicon::from_path(p)?);
    }
    Ok(scorer)
}

/// Loads, deduplicates across files, and applies the country / month filters.
pub fn load_corpus(
    config: &PipelineConfig,
) -> Result<(Vec<TweetRecord>, Option<Vec<CaseSeries>>, IngestSummary)> {
    let mut summary = IngestSummary::default();
    let mut records = Vec::new();
    for path in &config.corpus {
        let format = match &config.corpus_format {
            Some(f) => f.parse()?,
            None => TweetFormat::from_path(path),
        };
        let load = ingest::load_tweets(path, format)?;
        summary.rejected += load.rejected.len();
        summary.duplicates += load.duplicates;
        records.extend(load.records);
    }
    let (records, cross_file_dups) = ingest::dedup(records);
    summary.duplicates += cross_file_dups;

    let range = config.date_range.as_ref().map(|r| (r.start, r.end));
    let mut kept = ingest::filter(&records, None, range)?;
    if !config.countries.is_empty() {
        kept.retain(|r| {
            r.country
                .as_deref()
                .is_some_and(|c| config.countries.iter().any(|w| w.eq_ignore_ascii_case(c)))
        });
    }
    summary.filtered_out = records.len() - kept.len();
    summary.records = kept.len();

    let cases = match &config.cases {
        Some(p) => {
            let load = ingest::load_case_counts(p)?;
            summary.case_rows_rejected = load.rejected.len();
            Some(load.series)
        }
        None => None,
    };
    Ok((kept, cases, summary))
}

/// Runs validation, ingest and scoring.
pub fn score_corpus(config: &PipelineConfig) -> std::result::Result<ScoredCorpus, PipelineError> {
    config.validate().at(Stage::Config)?;
    let (records, cases, ingest) = load_corpus(config).at(Stage::Ingest)?;
    let scorer = build_scorer(config).at(Stage::Classify)?;
    let tweets = scorer.score_all(&records).at(Stage::Classify)?;
    Ok(ScoredCorpus {
        tweets,
        cases,
        ingest,
        backend: scorer.backend().name().to_string(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub backend: String,
    pub config: PipelineConfig,
    pub inputs: Vec<FileDigest>,
    pub ingest: IngestSummary,
    pub outputs: Vec<FileDigest>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

/// Runs `command` end to end and writes its outputs plus `manifest.json`
/// into the configured output directory.
pub fn run_pipeline(
    config: &PipelineConfig,
    command: Command,
) -> std::result::Result<Manifest, PipelineError> {
    let scored = score_corpus(config)?;
    let stopwords = if command.ngrams() {
        match &config.stopwords {
            Some(p) => Stopwords::from_path(p).at(Stage::Aggregate)?,
            None => ngram::bundled_stopwords(),
        }
    } else {
        Stopwords::default()
    };

    let mut files: Vec<(String, String)> = vec![
        ("scored.csv".into(), scored_csv(&scored.tweets)),
        ("predictions.csv".into(), predictions_csv(&scored.tweets)),
    ];
    if command.aggregates() {
        files.extend(aggregate_files(&scored).at(Stage::Aggregate)?);
    }
    if command.ngrams() {
        files.extend(ngram_files(&scored.tweets, config, &stopwords).at(Stage::Aggregate)?);
    }

    let out_dir = &config.output_dir;
    fs::create_dir_all(out_dir)
        .map_err(|e| Error::io(out_dir, e))
        .at(Stage::Aggregate)?;
    let mut outputs = Vec::new();
    for (name, contents) in &files {
        let path = out_dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)
                .map_err(|e| Error::io(parent, e))
                .at(Stage::Aggregate)?;
        }
        fs::write(&path, contents)
            .map_err(|e| Error::io(&path, e))
            .at(Stage::Aggregate)?;
        outputs.push(FileDigest {
            path: name.clone(),
            sha256: sha256_hex(contents.as_bytes()),
        });
    }

    let inputs = config
        .input_paths()
        .into_iter()
        .map(|p| {
            digest_path(p).map(|sha256| FileDigest {
                path: p.display().to_string(),
                sha256,
            })
        })
        .collect::<Result<Vec<_>>>()
        .at(Stage::Ingest)?;

    let manifest = Manifest {
        tool: TOOL_NAME.into(),
        version: TOOL_VERSION.into(),
        command: command.as_str().into(),
        backend: scored.backend.clone(),
        config: config.clone(),
        inputs,
        ingest: scored.ingest.clone(),
        outputs,
    };
    let mut json = serde_json::to_string_pretty(&manifest)
        .map_err(Error::from)
        .at(Stage::Aggregate)?;
    json.push('\n');
    let manifest_path = out_dir.join(MANIFEST_FILE);
    fs::write(&manifest_path, json)
        .map_err(|e| Error::io(&manifest_path, e))
        .at(Stage::Aggregate)?;
    Ok(manifest)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Digest of a file, or of a directory's files in sorted path order.
fn digest_path(path: &Path) -> Result<String> {
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| Error::io(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        entries.sort();
        let mut hasher = Sha256::new();
        for entry in entries {
            let bytes = fs::read(&entry).map_err(|e| Error::io(&entry, e))?;
            let name = entry.file_name().unwrap_or_default().to_string_lossy();
            hasher.update(name.as_bytes());
            hasher.update([0]);
            hasher.update(Sha256::digest(&bytes));
        }
        Ok(hex::encode(hasher.finalize()))
    } else {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Ok(sha256_hex(&bytes))
    }
}

/// Fixed six-decimal rendering used by every CSV.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.6}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn csv_string(rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        writer.write_record(&row)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Config(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn label_header() -> impl Iterator<Item = String> {
    SentimentLabel::ALL
        .into_iter()
        .map(|l| l.as_str().to_string())
}

pub fn scored_csv(tweets: &[ScoredTweet]) -> String {
    let header = [
        "id",
        "created_at",
        "country",
        "month",
        "labels",
        "vaccine_score",
        "naive_score",
        "stance",
        "polarity_group",
        "normalized_text",
    ]
    .map(String::from)
    .to_vec();
    let rows = tweets.iter().map(|t| {
        vec![
            t.record.id.clone(),
            t.record.timestamp.format("%Y-%m-%dT%H:%M:%SZ").to_string(),
            t.record.country.clone().unwrap_or_default(),
            t.record.month().to_string(),
            t.labels.to_string(),
            fmt_float(t.vaccine_score),
            fmt_float(t.naive_score),
            t.stance.to_string(),
            t.polarity_group.to_string(),
            t.normalized.to_string(),
        ]
    });
    csv_string(std::iter::once(header).chain(rows)).expect("in-memory csv")
}

/// `id,p0..p10` in the format the precomputed backend reads back.
pub fn predictions_csv(tweets: &[ScoredTweet]) -> String {
    let header = std::iter::once("id".to_string())
        .chain(label_header())
        .collect();
    let rows = tweets.iter().map(|t| {
        std::iter::once(t.record.id.clone())
            .chain(t.vector.probs().iter().map(|p| p.to_string()))
            .collect()
    });
    csv_string(std::iter::once(header).chain(rows)).expect("in-memory csv")
}

fn aggregate_files(scored: &ScoredCorpus) -> Result<Vec<(String, String)>> {
    let tweets = &scored.tweets;
    let mut files = Vec::new();

    let monthly = aggregate::aggregate_monthly(tweets, scored.cases.as_deref());
    let header = [
        "country",
        "month",
        "tweet_count",
        "mean_vaccine_score",
        "mean_naive_score",
    ]
    .map(String::from)
    .into_iter()
    .chain(label_header())
    .chain(
        [
            "labels_0",
            "labels_1",
            "labels_2",
            "labels_3plus",
            "new_cases",
        ]
        .map(String::from),
    )
    .collect();
    let rows = monthly.iter().map(|m| {
        [
            m.country.clone(),
            m.month.to_string(),
            m.tweet_count.to_string(),
            fmt_opt(m.mean_vaccine_score),
            fmt_opt(m.mean_naive_score),
        ]
        .into_iter()
        .chain(m.per_label_counts.as_array().iter().map(usize::to_string))
        .chain(
            m.label_count_histogram
                .counts()
                .iter()
                .map(usize::to_string),
        )
        .chain(std::iter::once(
            m.new_cases.map(|c| c.to_string()).unwrap_or_default(),
        ))
        .collect()
    });
    files.push((
        "monthly.csv".into(),
        csv_string(std::iter::once(header).chain(rows))?,
    ));

    if !tweets.is_empty() {
        let dist = aggregate::label_count_distribution(tweets)?;
        let fractions = dist.fractions();
        let rows = (0..4).map(|i| {
            vec![
                aggregate::LabelHistogram::BUCKETS[i].to_string(),
                dist.histogram.counts()[i].to_string(),
                fmt_float(fractions[i]),
            ]
        });
        let header = ["labels", "count", "fraction"].map(String::from).to_vec();
        files.push((
            "label_count_distribution.csv".into(),
            csv_string(std::iter::once(header).chain(rows))?,
        ));
    }

    let totals = aggregate::sentiment_totals(tweets);
    let rows = SentimentLabel::ALL
        .into_iter()
        .map(|l| vec![l.as_str().to_string(), totals.get(l).to_string()]);
    let header = ["label", "count"].map(String::from).to_vec();
    files.push((
        "sentiment_totals.csv".into(),
        csv_string(std::iter::once(header).chain(rows))?,
    ));

    let countries: Vec<String> = aggregate::sentiment_share_by_country(tweets)
        .into_keys()
        .collect();
    let mut rows = Vec::new();
    for country in &countries {
        for kind in [ScoreKind::Vaccine, ScoreKind::Naive] {
            let s = aggregate::score_distribution_stats(tweets, country, kind)?;
            rows.push(vec![
                country.clone(),
                kind.as_str().to_string(),
                s.count.to_string(),
                fmt_float(s.min),
                fmt_float(s.q1),
                fmt_float(s.median),
                fmt_float(s.q3),
                fmt_float(s.max),
                fmt_float(s.mean),
            ]);
        }
    }
    let header = [
        "country", "score", "count", "min", "q1", "median", "q3", "max", "mean",
    ]
    .map(String::from)
    .to_vec();
    files.push((
        "score_stats.csv".into(),
        csv_string(std::iter::once(header).chain(rows))?,
    ));

    let shares = aggregate::sentiment_share_by_country(tweets);
    let header = std::iter::once("country".to_string())
        .chain(label_header())
        .collect();
    let rows = shares.iter().map(|(country, fracs)| {
        std::iter::once(country.clone())
            .chain(fracs.iter().map(|f| fmt_float(*f)))
            .collect()
    });
    files.push((
        "sentiment_share.csv".into(),
        csv_string(std::iter::once(header).chain(rows))?,
    ));

    let header = ["country", "month"]
        .map(String::from)
        .into_iter()
        .chain(label_header())
        .collect();
    let mut rows = Vec::new();
    for country in &countries {
        for (month, counts) in aggregate::monthly_sentiment_trend(tweets, country) {
            rows.push(
                [country.clone(), month.to_string()]
                    .into_iter()
                    .chain(counts.as_array().iter().map(usize::to_string))
                    .collect(),
            );
        }
    }
    files.push((
        "sentiment_trend.csv".into(),
        csv_string(std::iter::once(header).chain(rows))?,
    ));

    Ok(files)
}

fn ngram_table(top: &[ngram::NgramCount]) -> Result<String> {
    let header = ["rank", "gram", "count"].map(String::from).to_vec();
    let rows = top
        .iter()
        .enumerate()
        .map(|(i, g)| vec![(i + 1).to_string(), g.joined(), g.count.to_string()]);
    csv_string(std::iter::once(header).chain(rows))
}

fn ngram_files(
    tweets: &[ScoredTweet],
    config: &PipelineConfig,
    stopwords: &Stopwords,
) -> Result<Vec<(String, String)>> {
    let mut files = Vec::new();
    for &n in &config.ngram_sizes {
        let all = ngram::top_k(tweets, n, config.top_k, stopwords)?;
        files.push((format!("ngrams/n{n}_all.csv"), ngram_table(&all)?));
        for (group, top) in ngram::top_k_by_group(tweets, n, config.top_k, stopwords)? {
            files.push((format!("ngrams/n{n}_{group}.csv"), ngram_table(&top)?));
        }
    }
    Ok(files)
}

/// Everything the pipeline computes for one tweet.
#[derive(Debug, Clone)]
pub struct Inspection {
    pub tweet: ScoredTweet,
    pub weights: WeightTable,
    pub threshold: f64,
    pub backend: String,
}

impl fmt::Display for Inspection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.tweet;
        writeln!(f, "id:              {}", t.record.id)?;
        writeln!(
            f,
            "created_at:      {}",
            t.record.timestamp.format("%Y-%m-%dT%H:%M:%SZ")
        )?;
        writeln!(f, "country:         {}", t.country_key())?;
        writeln!(f, "text:            {}", t.record.text)?;
        writeln!(f, "normalized:      {}", t.normalized)?;
        writeln!(f, "backend:         {}", self.backend)?;
        writeln!(f, "probabilities (threshold {}):", self.threshold)?;
        for label in SentimentLabel::ALL {
            let mark = if t.labels.contains(label) { "*" } else { " " };
            writeln!(
                f,
                "  {mark} {:<16} {:.4}  weight {:+}",
                label.as_str(),
                t.vector.get(label),
                self.weights.weight(label)
            )?;
        }
        let names: Vec<&str> = t.labels.iter().map(SentimentLabel::as_str).collect();
        writeln!(
            f,
            "labels:          {}",
            if names.is_empty() {
                "(none)".to_string()
            } else {
                names.join(", ")
            }
        )?;
        let mut sum = String::new();
        for (i, label) in t.labels.iter().enumerate() {
            if i > 0 {
                sum.push_str(" + ");
            }
            let _ = write!(sum, "({})", self.weights.weight(label));
        }
        if sum.is_empty() {
            sum.push('0');
        }
        writeln!(
            f,
            "vaccine_score:   {} / {} = {:.6} (2dp: {:.2})",
            sum,
            self.weights.divisor(),
            t.vaccine_score,
            polarity::truncate_toward_zero(t.vaccine_score, 2)
        )?;
        writeln!(f, "stance:          {}", t.stance)?;
        writeln!(f, "naive_score:     {:.6}", t.naive_score)?;
        write!(f, "polarity_group:  {}", t.polarity_group)
    }
}

/// Scores the single tweet `id` from the configured corpus.
pub fn inspect(
    config: &PipelineConfig,
    id: &str,
) -> std::result::Result<Inspection, PipelineError> {
    config.validate().at(Stage::Config)?;
    let (records, _, _) = load_corpus(config).at(Stage::Ingest)?;
    let record = records
        .iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::NoData(format!("tweet id {id:?}")))
        .at(Stage::Ingest)?;
    let scorer = build_scorer(config).at(Stage::Classify)?;
    let tweet = scorer.score(record).at(Stage::Classify)?;
    Ok(Inspection {
        tweet,
        weights: scorer.weights().clone(),
        threshold: scorer.threshold(),
        backend: scorer.backend().name().to_string(),
    })
}
