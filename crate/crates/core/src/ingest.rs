//! Loading, validation, deduplication and filtering of tweet records and
//! monthly case-count series.

use std::collections::{btree_map, BTreeMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, Datelike, NaiveDate, NaiveDateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A UTC calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth {
    year: i32,
    month: u32,
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) || !(0..=9999).contains(&year) {
            return Err(Error::InvalidParameter(format!(
                "invalid month {year:04}-{month:02}"
            )));
        }
        Ok(YearMonth { year, month })
    }

    pub fn of(ts: &DateTime<Utc>) -> Self {
        YearMonth {
            year: ts.year(),
            month: ts.month(),
        }
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> u32 {
        self.month
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = Error;

    /// Parses `YYYY-MM`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("expected YYYY-MM, got {s:?}"));
        let (y, m) = s.trim().split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 {
            return Err(bad());
        }
        let year = y.parse().map_err(|_| bad())?;
        let month = m.parse().map_err(|_| bad())?;
        YearMonth::new(year, month)
    }
}

impl Serialize for YearMonth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for YearMonth {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetRecord {
    pub id: String,
    pub timestamp: DateTime<Utc>,
    /// ISO 3166-1 alpha-2, upper case.
    pub country: Option<String>,
    pub text: String,
}

impl TweetRecord {
    pub fn month(&self) -> YearMonth {
        YearMonth::of(&self.timestamp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TweetFormat {
    Jsonl,
    Csv,
}

impl TweetFormat {
    /// `.csv` is CSV, everything else JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => TweetFormat::Csv,
            _ => TweetFormat::Jsonl,
        }
    }
}

impl FromStr for TweetFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "json" => Ok(TweetFormat::Jsonl),
            "csv" => Ok(TweetFormat::Csv),
            other => Err(Error::InvalidParameter(format!(
                "unknown tweet format {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejected {
    /// 1-based line (JSONL) or record (CSV, header excluded) number.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct TweetLoad {
    pub records: Vec<TweetRecord>,
    pub rejected: Vec<Rejected>,
    pub duplicates: usize,
}

impl TweetLoad {
    pub fn valid_rows(&self) -> usize {
        self.records.len() + self.duplicates
    }
}

#[derive(Deserialize)]
struct RawTweet {
    id: Option<serde_json::Value>,
    created_at: Option<String>,
    country: Option<String>,
    text: Option<String>,
}

/// Loads tweets in file order. Malformed rows are reported in
/// [`TweetLoad::rejected`]; a repeated id keeps its first occurrence.
pub fn load_tweets(path: impl AsRef<Path>, format: TweetFormat) -> Result<TweetLoad> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let rows = match format {
        TweetFormat::Jsonl => read_jsonl_rows(path, file)?,
        TweetFormat::Csv => read_csv_rows(file),
    };

    let mut load = TweetLoad::default();
    let mut valid = Vec::new();
    for (line, row) in rows {
        match row.and_then(validate) {
            Ok(record) => valid.push(record),
            Err(reason) => load.rejected.push(Rejected { line, reason }),
        }
    }
    let (records, duplicates) = dedup(valid);
    if duplicates > 0 {
        log::warn!(
            "{}: discarded {duplicates} duplicate tweet ids",
            path.display()
        );
    }
    if !load.rejected.is_empty() {
        log::warn!(
            "{}: rejected {} malformed rows",
            path.display(),
            load.rejected.len()
        );
    }
    if records.is_empty() {
        return Err(Error::EmptyCorpus {
            path: path.to_path_buf(),
            rejected: load.rejected.len(),
        });
    }
    load.records = records;
    load.duplicates = duplicates;
    Ok(load)
}

type RawRow = (usize, std::result::Result<RawTweet, String>);

fn read_jsonl_rows(path: &Path, file: File) -> Result<Vec<RawRow>> {
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str::<RawTweet>(&line).map_err(|e| format!("invalid JSON: {e}"));
        rows.push((i + 1, row));
    }
    Ok(rows)
}

fn read_csv_rows(file: File) -> Vec<RawRow> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(file);
    let headers = match reader.headers() {
        Ok(h) => h.clone(),
        Err(e) => return vec![(0, Err(format!("unreadable header: {e}")))],
    };
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (id, created_at, country, text) = (
        column("id"),
        column("created_at"),
        column("country"),
        column("text"),
    );
    reader
        .records()
        .enumerate()
        .map(|(i, rec)| {
            let row = rec.map_err(|e| format!("invalid CSV: {e}")).map(|rec| {
                let field = |c: Option<usize>| c.and_then(|c| rec.get(c)).map(str::to_string);
                RawTweet {
                    id: field(id).map(serde_json::Value::String),
                    created_at: field(created_at),
                    country: field(country),
                    text: field(text),
                }
            });
            (i + 1, row)
        })
        .collect()
}

fn validate(raw: RawTweet) -> std::result::Result<TweetRecord, String> {
    let id = match raw.id {
        Some(serde_json::Value::String(s)) => s.trim().to_string(),
        Some(serde_json::Value::Number(n)) => n.to_string(),
        Some(_) => return Err("id must be a string or integer".into()),
        None => return Err("missing id".into()),
    };
    if id.is_empty() {
        return Err("empty id".into());
    }
    let created_at = raw.created_at.ok_or("missing created_at")?;
    let timestamp = parse_timestamp(&created_at)
        .ok_or_else(|| format!("unparseable created_at {created_at:?}"))?;
    let country = match raw.country.as_deref().map(str::trim) {
        None | Some("") => None,
        Some(c) => Some(parse_country(c)?),
    };
    let text = raw.text.ok_or("missing text")?;
    if text.trim().is_empty() {
        return Err("empty text".into());
    }
    Ok(TweetRecord {
        id,
        timestamp,
        country,
        text,
    })
}

fn parse_country(c: &str) -> std::result::Result<String, String> {
    if c.len() == 2 && c.chars().all(|ch| ch.is_ascii_alphabetic()) {
        Ok(c.to_ascii_uppercase())
    } else {
        Err(format!("country {c:?} is not an ISO 3166-1 alpha-2 code"))
    }
}

/// RFC 3339, or a zone-less `YYYY-MM-DD[T ]HH:MM:SS` / `YYYY-MM-DD` taken as UTC.
pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    let s = s.trim();
    if let Ok(ts) = DateTime::parse_from_rfc3339(s) {
        return Some(ts.with_timezone(&Utc));
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
        if let Ok(naive) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(naive.and_utc());
        }
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|naive| naive.and_utc())
}

/// Keeps the first record for each id. Returns the survivors in input order
/// and the number discarded.
pub fn dedup(records: Vec<TweetRecord>) -> (Vec<TweetRecord>, usize) {
    let mut seen = HashSet::with_capacity(records.len());
    let before = records.len();
    let kept: Vec<TweetRecord> = records
        .into_iter()
        .filter(|r| seen.insert(r.id.clone()))
        .collect();
    let dropped = before - kept.len();
    (kept, dropped)
}

/// Retains records matching every supplied predicate. `months` is the
/// half-open range `[start, end)`; a country filter never matches a record
/// without a country.
pub fn filter(
    corpus: &[TweetRecord],
    country: Option<&str>,
    months: Option<(YearMonth, YearMonth)>,
) -> Result<Vec<TweetRecord>> {
    if let Some((start, end)) = months {
        if start >= end {
            return Err(Error::InvalidRange {
                start: start.to_string(),
                end: end.to_string(),
            });
        }
    }
    Ok(corpus
        .iter()
        .filter(|r| match country {
            Some(c) => r
                .country
                .as_deref()
                .is_some_and(|rc| rc.eq_ignore_ascii_case(c)),
            None => true,
        })
        .filter(|r| match months {
            Some((start, end)) => (start..end).contains(&r.month()),
            None => true,
        })
        .cloned()
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseSeries {
    pub country: String,
    /// Strictly increasing months.
    pub points: Vec<(YearMonth, u64)>,
}

impl CaseSeries {
    pub fn get(&self, month: YearMonth) -> Option<u64> {
        self.points
            .binary_search_by_key(&month, |(m, _)| *m)
            .ok()
            .map(|i| self.points[i].1)
    }
}

#[derive(Debug, Clone, Default)]
pub struct CaseLoad {
    /// One series per country, ordered by country code.
    pub series: Vec<CaseSeries>,
    pub rejected: Vec<Rejected>,
}

/// Reads a `country,month,new_cases` CSV.
pub fn load_case_counts(path: impl AsRef<Path>) -> Result<CaseLoad> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(file);
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| {
                Error::table(
                    path.display().to_string(),
                    format!("missing column {name:?}"),
                )
            })
    };
    let (c_country, c_month, c_cases) =
        (column("country")?, column("month")?, column("new_cases")?);

    let mut by_country: BTreeMap<String, BTreeMap<YearMonth, u64>> = BTreeMap::new();
    let mut rejected = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 1;
        let parsed = rec
            .map_err(|e| format!("invalid CSV: {e}"))
            .and_then(|rec| {
                let field = |c: usize| rec.get(c).map(str::trim).unwrap_or("");
                let country = parse_country(field(c_country))?;
                let month: YearMonth = field(c_month)
                    .parse()
                    .map_err(|_| format!("unparseable month {:?}", field(c_month)))?;
                let raw = field(c_cases);
                let cases: i64 = raw
                    .parse()
                    .map_err(|_| format!("unparseable new_cases {raw:?}"))?;
                if cases < 0 {
                    return Err(format!("negative new_cases {cases}"));
                }
                Ok((country, month, cases as u64))
            });
        match parsed {
            Ok((country, month, cases)) => {
                match by_country.entry(country.clone()).or_default().entry(month) {
                    btree_map::Entry::Vacant(slot) => {
                        slot.insert(cases);
                    }
                    btree_map::Entry::Occupied(_) => rejected.push(Rejected {
                        line,
                        reason: format!("duplicate month {month} for {country}"),
                    }),
                }
            }
            Err(reason) => rejected.push(Rejected { line, reason }),
        }
    }
    if !rejected.is_empty() {
        log::warn!(
            "{}: rejected {} case-count rows",
            path.display(),
            rejected.len()
        );
    }
    let series = by_country
        .into_iter()
        .map(|(country, months)| CaseSeries {
            country,
            points: months.into_iter().collect(),
        })
        .collect();
    Ok(CaseLoad { series, rejected })
}
