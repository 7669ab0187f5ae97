use std::fs;
use std::path::{Path, PathBuf};

use vaxsent::pipeline::{
    inspect, run_pipeline, BackendKind, Command, PipelineConfig, Stage, MANIFEST_FILE,
};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn config(out: &Path) -> PipelineConfig {
    let mut c = PipelineConfig::from_path(fixture("synthetic/config.toml")).unwrap();
    c.output_dir = out.to_path_buf();
    c
}

fn failing_stage(config: &PipelineConfig) -> Stage {
    run_pipeline(config, Command::Report).unwrap_err().stage
}

#[test]
fn config_paths_are_rebased_on_the_config_directory() {
    let c = PipelineConfig::from_path(fixture("synthetic/config.toml")).unwrap();
    assert_eq!(c.corpus, vec![fixture("synthetic/tweets.jsonl")]);
    assert_eq!(c.cases, Some(fixture("synthetic/cases.csv")));
    assert_eq!(c.backend, BackendKind::RuleLexicon);
    c.validate().unwrap();
}

#[test]
fn unknown_config_keys_are_rejected() {
    assert!(PipelineConfig::from_toml_str("corpus = [\"a\"]\nthreshhold = 0.4\n").is_err());
}

#[test]
fn commands_write_their_own_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let score = run_pipeline(&config(&dir.path().join("s")), Command::Score).unwrap();
    let names: Vec<&str> = score.outputs.iter().map(|o| o.path.as_str()).collect();
    assert_eq!(names, ["scored.csv", "predictions.csv"]);
    assert_eq!(score.ingest.records, 200);

    let ngrams = run_pipeline(&config(&dir.path().join("n")), Command::Ngrams).unwrap();
    assert!(ngrams
        .outputs
        .iter()
        .any(|o| o.path == "ngrams/n3_negative.csv"));
    assert!(!ngrams.outputs.iter().any(|o| o.path == "monthly.csv"));

    let report = run_pipeline(&config(&dir.path().join("r")), Command::Report).unwrap();
    assert_eq!(report.outputs.len(), 2 + 6 + 8);
    let manifest = fs::read_to_string(dir.path().join("r").join(MANIFEST_FILE)).unwrap();
    let json: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(json["backend"], "rule-lexicon");
    assert_eq!(json["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn monthly_output_joins_case_counts() {
    let dir = tempfile::tempdir().unwrap();
    run_pipeline(&config(dir.path()), Command::Aggregate).unwrap();
    let monthly = fs::read_to_string(dir.path().join("monthly.csv")).unwrap();
    let header = monthly.lines().next().unwrap();
    assert!(header.starts_with("country,month,tweet_count,mean_vaccine_score,mean_naive_score"));
    let with_cases = monthly
        .lines()
        .skip(1)
        .filter(|l| !l.ends_with(','))
        .count();
    assert!(with_cases > 0);
}

#[test]
fn country_and_date_filters_apply() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(dir.path());
    c.countries = vec!["in".into()];
    c.date_range = Some(toml::from_str("start = \"2021-01\"\nend = \"2021-03\"\n").unwrap());
    let manifest = run_pipeline(&c, Command::Score).unwrap();
    assert!(manifest.ingest.filtered_out > 0);
    let scored = fs::read_to_string(dir.path().join("scored.csv")).unwrap();
    for line in scored.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[2], "IN");
        assert!(cols[3] == "2021-01" || cols[3] == "2021-02", "{line}");
    }
}

#[test]
fn failures_name_their_stage() {
    let dir = tempfile::tempdir().unwrap();

    let mut c = config(dir.path());
    c.threshold = 1.0;
    assert_eq!(failing_stage(&c), Stage::Config);

    let mut c = config(dir.path());
    c.corpus = vec![dir.path().join("missing.jsonl")];
    assert_eq!(failing_stage(&c), Stage::Config);

    let garbage = dir.path().join("garbage.jsonl");
    fs::write(&garbage, "not a tweet\n").unwrap();
    let mut c = config(dir.path());
    c.corpus = vec![garbage];
    assert_eq!(failing_stage(&c), Stage::Ingest);

    let partial = dir.path().join("partial.csv");
    fs::write(&partial, "syn-0000,joking\n").unwrap();
    let mut c = config(dir.path());
    c.backend = BackendKind::Precomputed;
    c.precomputed_labels = Some(partial);
    assert_eq!(failing_stage(&c), Stage::Classify);

    let blocker = dir.path().join("blocker");
    fs::write(&blocker, "").unwrap();
    let c = config(&blocker);
    assert_eq!(failing_stage(&c), Stage::Aggregate);

    let codes: Vec<i32> = [
        Stage::Config,
        Stage::Ingest,
        Stage::Classify,
        Stage::Aggregate,
    ]
    .iter()
    .map(|s| s.exit_code())
    .collect();
    assert_eq!(codes, [2, 3, 4, 5]);
}

#[test]
fn inspect_shows_the_score_arithmetic() {
    let dir = tempfile::tempdir().unwrap();
    let report = inspect(&config(dir.path()), "syn-annoyed-denial").unwrap();
    assert!((report.tweet.vaccine_score + 6.0 / 11.0).abs() < 1e-12);
    let text = report.to_string();
    assert!(text.contains("(-1) + (-5) / 11 = -0.545455"), "{text}");
    assert!(text.contains("stance:          anti"), "{text}");

    assert_eq!(
        inspect(&config(dir.path()), "no-such-id")
            .unwrap_err()
            .stage,
        Stage::Ingest
    );
}
