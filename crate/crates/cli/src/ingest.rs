//! Reading labelled validation records into a confusion table.
//!
//! Two formats are accepted, both described in `docs/input-formats.md`:
//! delimited text with a header row, and JSON lines. A dataset holds either
//! binary predictions (`a`) or real scores (`score`, thresholded as
//! `a = score > t`), never both.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use serde_json::Value;
use thiserror::Error;
use tversky_core::ConfusionCounts;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("input file not found: {}", .0.display())]
    NotFound(PathBuf),

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("line {line}: mixed input modes: {message}")]
    MixedMode { line: u64, message: String },

    #[error("input contains no records")]
    Empty,

    #[error("score threshold must be finite, got {0}")]
    InvalidThreshold(f64),
}

pub type Result<T> = std::result::Result<T, IngestError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    JsonLines,
}

impl InputFormat {
    /// `.jsonl` and `.ndjson` are JSON lines; everything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext)
                if ext.eq_ignore_ascii_case("jsonl") || ext.eq_ignore_ascii_case("ndjson") =>
            {
                InputFormat::JsonLines
            }
            _ => InputFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordMode {
    /// Column `a` holds binary predictions.
    Predictions,
    /// Column `score` holds real scores.
    Scores,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ingested {
    pub counts: ConfusionCounts,
    pub mode: RecordMode,
}

pub fn ingest(path: &Path, format: Option<InputFormat>, threshold: f64) -> Result<Ingested> {
    let file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => IngestError::NotFound(path.to_path_buf()),
        _ => IngestError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    let format = format.unwrap_or_else(|| InputFormat::from_path(path));
    ingest_reader(BufReader::new(file), format, threshold).map_err(|e| match e {
        IngestError::Io { source, .. } => IngestError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

pub fn ingest_reader<R: Read>(reader: R, format: InputFormat, threshold: f64) -> Result<Ingested> {
    if !threshold.is_finite() {
        return Err(IngestError::InvalidThreshold(threshold));
    }
    let mut tally = Tally::new(threshold);
    match format {
        InputFormat::Csv => read_csv(reader, &mut tally)?,
        InputFormat::JsonLines => read_jsonl(BufReader::new(reader), &mut tally)?,
    }
    tally.finish()
}

struct Tally {
    counts: ConfusionCounts,
    mode: Option<RecordMode>,
    threshold: f64,
    records: u64,
}

impl Tally {
    fn new(threshold: f64) -> Self {
        Self {
            counts: ConfusionCounts::default(),
            mode: None,
            threshold,
            records: 0,
        }
    }

    fn push(&mut self, z: bool, a: bool) {
        self.counts.record(z, a);
        self.records += 1;
    }

    fn finish(self) -> Result<Ingested> {
        match self.mode {
            Some(mode) if self.records > 0 => Ok(Ingested {
                counts: self.counts,
                mode,
            }),
            _ => Err(IngestError::Empty),
        }
    }
}

fn parse_err(line: u64, message: impl Into<String>) -> IngestError {
    IngestError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_binary(field: &str, name: &str, line: u64) -> Result<bool> {
    match field {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(parse_err(
            line,
            format!("`{name}` must be exactly 0 or 1, got {other:?}"),
        )),
    }
}

fn parse_score(field: &str, line: u64) -> Result<f64> {
    let score: f64 = field
        .parse()
        .map_err(|_| parse_err(line, format!("`score` is not a number: {field:?}")))?;
    if !score.is_finite() {
        return Err(parse_err(
            line,
            format!("`score` must be finite, got {field:?}"),
        ));
    }
    Ok(score)
}

fn read_csv<R: Read>(reader: R, tally: &mut Tally) -> Result<()> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = match rdr.headers() {
        Ok(h) => h.clone(),
        Err(e) => return Err(csv_error(e)),
    };
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(IngestError::Empty);
    }
    let col = |name: &str| headers.iter().position(|h| h == name);
    let z_col = col("z").ok_or_else(|| parse_err(1, "header has no `z` column"))?;
    let (value_col, mode) = match (col("a"), col("score")) {
        (Some(_), Some(_)) => {
            return Err(IngestError::MixedMode {
                line: 1,
                message: "header has both `a` and `score` columns".into(),
            })
        }
        (Some(i), None) => (i, RecordMode::Predictions),
        (None, Some(i)) => (i, RecordMode::Scores),
        (None, None) => return Err(parse_err(1, "header needs an `a` or a `score` column")),
    };
    tally.mode = Some(mode);

    for row in rdr.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map_or(0, |p| p.line());
        let z = parse_binary(&row[z_col], "z", line)?;
        let a = match mode {
            RecordMode::Predictions => parse_binary(&row[value_col], "a", line)?,
            RecordMode::Scores => parse_score(&row[value_col], line)? > tally.threshold,
        };
        tally.push(z, a);
    }
    Ok(())
}

fn csv_error(e: csv::Error) -> IngestError {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(source) => IngestError::Io {
            path: PathBuf::new(),
            source,
        },
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => parse_err(line, format!("expected {expected_len} fields, found {len}")),
        csv::ErrorKind::Utf8 { err, .. } => parse_err(line, format!("invalid UTF-8: {err}")),
        other => parse_err(line, format!("{other:?}")),
    }
}

fn json_binary(v: &Value, name: &str, line: u64) -> Result<bool> {
    match v.as_u64() {
        Some(0) if v.is_u64() => Ok(false),
        Some(1) if v.is_u64() => Ok(true),
        _ => Err(parse_err(
            line,
            format!("`{name}` must be the integer 0 or 1, got {v}"),
        )),
    }
}

fn read_jsonl<R: BufRead>(reader: R, tally: &mut Tally) -> Result<()> {
    for (idx, text) in reader.lines().enumerate() {
        let line = idx as u64 + 1;
        let text = text.map_err(|source| IngestError::Io {
            path: PathBuf::new(),
            source,
        })?;
        if text.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| parse_err(line, format!("invalid JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| parse_err(line, "record must be a JSON object"))?;
        let z = obj
            .get("z")
            .ok_or_else(|| parse_err(line, "record has no `z` field"))?;
        let z = json_binary(z, "z", line)?;
        let mode = match (obj.get("a"), obj.get("score")) {
            (Some(_), Some(_)) => {
                return Err(IngestError::MixedMode {
                    line,
                    message: "record has both `a` and `score`".into(),
                })
            }
            (Some(_), None) => RecordMode::Predictions,
            (None, Some(_)) => RecordMode::Scores,
            (None, None) => return Err(parse_err(line, "record needs an `a` or a `score` field")),
        };
        match tally.mode {
            None => tally.mode = Some(mode),
            Some(m) if m != mode => {
                return Err(IngestError::MixedMode {
                    line,
                    message: "dataset mixes `a` records and `score` records".into(),
                })
            }
            Some(_) => {}
        }
        let a = match mode {
            RecordMode::Predictions => json_binary(&obj["a"], "a", line)?,
            RecordMode::Scores => {
                let score = obj["score"].as_f64().ok_or_else(|| {
                    parse_err(
                        line,
                        format!("`score` must be a number, got {}", obj["score"]),
                    )
                })?;
                score > tally.threshold
            }
        };
        tally.push(z, a);
    }
    Ok(())
}
