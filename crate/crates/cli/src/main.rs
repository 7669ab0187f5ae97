//! `vaxsent`: score tweets, aggregate them by country and month, and rank
//! n-grams per polarity group.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 ingest failure,
//! 4 classification failure, 5 aggregation or output failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vaxsent::ingest::YearMonth;
use vaxsent::pipeline::{
    self, BackendKind, Command, MonthRange, PipelineConfig, PipelineError, Stage,
};

#[derive(Parser)]
#[command(
    name = "vaxsent",
    version,
    about = "Vaccine sentiment scoring and aggregation"
)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,

    /// Log verbosity; repeat for more detail.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the configuration and that every input exists.
    Validate,
    /// Score every tweet.
    Score,
    /// Score, then write monthly and per-country aggregates.
    Aggregate,
    /// Score, then write top-k n-grams overall and per polarity group.
    Ngrams,
    /// Everything: scores, aggregates and n-grams.
    Report,
    /// Show how one tweet is normalized, labelled and scored.
    Inspect {
        /// Tweet id.
        id: String,
    },
}

/// Options layered over the TOML config; paths are relative to the current
/// directory.
#[derive(Args)]
struct Overrides {
    /// TOML configuration file.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,
    /// Tweet file (JSONL or CSV); repeat for several. Replaces the configured corpus.
    #[arg(long, global = true)]
    corpus: Vec<PathBuf>,
    /// rule-lexicon, precomputed or exported-model.
    #[arg(long, global = true)]
    backend: Option<BackendKind>,
    #[arg(long, global = true)]
    precomputed_labels: Option<PathBuf>,
    #[arg(long, global = true)]
    model_dir: Option<PathBuf>,
    /// Per-label decision threshold in (0, 1).
    #[arg(long, global = true)]
    threshold: Option<f64>,
    #[arg(long, global = true)]
    substitutions: Option<PathBuf>,
    #[arg(long, global = true)]
    rule_lexicon: Option<PathBuf>,
    #[arg(long, global = true)]
    weights: Option<PathBuf>,
    /// Word polarity lexicon for the naive score.
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    #[arg(long, global = true)]
    stopwords: Option<PathBuf>,
    #[arg(long, global = true)]
    cases: Option<PathBuf>,
    /// ISO alpha-2 country to keep; repeat for several.
    #[arg(long = "country", global = true)]
    countries: Vec<String>,
    /// First month to keep, YYYY-MM (inclusive).
    #[arg(long, global = true, requires = "to")]
    from: Option<YearMonth>,
    /// Month to stop at, YYYY-MM (exclusive).
    #[arg(long, global = true, requires = "from")]
    to: Option<YearMonth>,
    #[arg(short, long, global = true)]
    output_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    top_k: Option<usize>,
    /// Comma-separated n-gram sizes.
    #[arg(long, global = true, value_delimiter = ',')]
    ngram_sizes: Vec<usize>,
}

impl Overrides {
    fn into_config(self) -> vaxsent::Result<PipelineConfig> {
        let mut config = match &self.config {
            Some(path) => PipelineConfig::from_path(path)?,
            None => PipelineConfig::default(),
        };
        if !self.corpus.is_empty() {
            config.corpus = self.corpus;
        }
        if let Some(b) = self.backend {
            config.backend = b;
        }
        if self.precomputed_labels.is_some() {
            config.precomputed_labels = self.precomputed_labels;
        }
        if self.model_dir.is_some() {
            config.model_dir = self.model_dir;
        }
        if let Some(t) = self.threshold {
            config.threshold = t;
        }
        for (flag, field) in [
            (self.substitutions, &mut config.substitutions),
            (self.rule_lexicon, &mut config.rule_lexicon),
            (self.weights, &mut config.weights),
            (self.lexicon, &mut config.lexicon),
            (self.stopwords, &mut config.stopwords),
        ] {
            if flag.is_some() {
                *field = flag;
            }
        }
        if self.cases.is_some() {
            config.cases = self.cases;
        }
        if !self.countries.is_empty() {
            config.countries = self.countries;
        }
        if let (Some(start), Some(end)) = (self.from, self.to) {
            config.date_range = Some(MonthRange { start, end });
        }
        if let Some(dir) = self.output_dir {
            config.output_dir = dir;
        }
        if let Some(k) = self.top_k {
            config.top_k = k;
        }
        if !self.ngram_sizes.is_empty() {
            config.ngram_sizes = self.ngram_sizes;
        }
        Ok(config)
    }
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    let config = cli
        .overrides
        .into_config()
        .map_err(|source| PipelineError {
            stage: Stage::Config,
            source,
        })?;
    let command = match cli.command {
        Cmd::Validate => {
            config.validate().map_err(|source| PipelineError {
                stage: Stage::Config,
                source,
            })?;
            println!("configuration ok: {} input(s)", config.input_paths().len());
            return Ok(());
        }
        Cmd::Inspect { id } => {
            println!("{}", pipeline::inspect(&config, &id)?);
            return Ok(());
        }
        Cmd::Score => Command::Score,
        Cmd::Aggregate => Command::Aggregate,
        Cmd::Ngrams => Command::Ngrams,
        Cmd::Report => Command::Report,
    };
    let manifest = pipeline::run_pipeline(&config, command)?;
    let ingest = &manifest.ingest;
    println!(
        "{}: {} tweets scored with {} ({} rejected, {} duplicates, {} filtered out); {} files in {}",
        manifest.command,
        ingest.records,
        manifest.backend,
        ingest.rejected,
        ingest.duplicates,
        ingest.filtered_out,
        manifest.outputs.len() + 1,
        config.output_dir.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.stage.exit_code() as u8)
        }
    }
}
