//! Reading a numeric column out of CSV or JSON-lines files.
//!
//! Raw numbers are cleaned on the way in: negatives are folded to their
//! absolute value, zeros are dropped (no leading digit), and anything that
//! does not parse to a finite number is dropped as non-finite. Every input
//! row lands in exactly one of those buckets.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use benford_core::LogValue;
use clap::ValueEnum;
use serde_json::Value;
use thiserror::Error;

use crate::error::{EXIT_DATA, EXIT_IO, EXIT_USAGE};

/// Header of the single-column sample files written by `benford gen`.
pub const SAMPLE_COLUMN: &str = "log10_value";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Csv,
    #[value(name = "jsonl", alias = "json_lines")]
    JsonLines,
}

/// How to interpret the selected column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ValueKind {
    /// `log10` samples when the file is a single `log10_value` column, raw numbers otherwise.
    #[default]
    Auto,
    /// Plain numbers.
    Raw,
    /// Base-10 logarithms, as written by `benford gen`.
    Log10,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Unreadable {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{name}: malformed input at line {line}: {message}")]
    Malformed {
        name: String,
        line: u64,
        message: String,
    },
    #[error("{name}: no column {column:?}")]
    MissingColumn { name: String, column: String },
    #[error("{name}: no usable values (zeros: {zeros}, non-finite: {nonfinite})")]
    NoUsableValues {
        name: String,
        zeros: u64,
        nonfinite: u64,
    },
}

impl IngestError {
    pub fn exit_code(&self) -> i32 {
        match self {
            IngestError::Unreadable { .. } => EXIT_IO,
            IngestError::MissingColumn { .. } => EXIT_USAGE,
            IngestError::Malformed { .. } | IngestError::NoUsableValues { .. } => EXIT_DATA,
        }
    }
}

/// A cleaned numeric column in log domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub values: Vec<LogValue>,
    pub row_count: u64,
    pub dropped_zero_count: u64,
    pub dropped_nonfinite_count: u64,
    pub negatives_folded_count: u64,
}

#[derive(Default)]
struct Cleaner {
    values: Vec<LogValue>,
    rows: u64,
    zeros: u64,
    nonfinite: u64,
    folded: u64,
}

impl Cleaner {
    fn push_text(&mut self, text: Option<&str>, logs: bool) {
        let parsed = text.and_then(|t| t.trim().parse::<f64>().ok());
        self.push_number(parsed, logs);
    }

    fn push_number(&mut self, number: Option<f64>, logs: bool) {
        self.rows += 1;
        let Some(x) = number.filter(|x| x.is_finite()) else {
            self.nonfinite += 1;
            return;
        };
        if logs {
            self.values.push(LogValue::new(x).expect("finite"));
            return;
        }
        if x == 0.0 {
            self.zeros += 1;
            return;
        }
        if x < 0.0 {
            self.folded += 1;
        }
        self.values
            .push(LogValue::from_positive(x.abs()).expect("non-zero finite"));
    }

    fn finish(self, name: String) -> Result<Dataset, IngestError> {
        if self.values.is_empty() {
            return Err(IngestError::NoUsableValues {
                name,
                zeros: self.zeros,
                nonfinite: self.nonfinite,
            });
        }
        Ok(Dataset {
            name,
            values: self.values,
            row_count: self.rows,
            dropped_zero_count: self.zeros,
            dropped_nonfinite_count: self.nonfinite,
            negatives_folded_count: self.folded,
        })
    }
}

/// Reads one column of `path`; `-` reads standard input.
pub fn ingest(
    path: &Path,
    column: Option<&str>,
    format: InputFormat,
    kind: ValueKind,
) -> Result<Dataset, IngestError> {
    let name = path.display().to_string();
    if path == Path::new("-") {
        return ingest_reader(std::io::stdin().lock(), name, column, format, kind);
    }
    let file = File::open(path).map_err(|source| IngestError::Unreadable {
        path: path.to_path_buf(),
        source,
    })?;
    ingest_reader(BufReader::new(file), name, column, format, kind)
}

pub fn ingest_reader<R: Read>(
    reader: R,
    name: String,
    column: Option<&str>,
    format: InputFormat,
    kind: ValueKind,
) -> Result<Dataset, IngestError> {
    match format {
        InputFormat::Csv => ingest_csv(reader, name, column, kind),
        InputFormat::JsonLines => ingest_json_lines(reader, name, column, kind),
    }
}

fn resolve_index(names: &[String], column: &str) -> Option<usize> {
    names
        .iter()
        .position(|n| n == column)
        .or_else(|| column.parse::<usize>().ok().filter(|&i| i < names.len()))
}

fn ingest_csv<R: Read>(
    reader: R,
    name: String,
    column: Option<&str>,
    kind: ValueKind,
) -> Result<Dataset, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let malformed = |name: &str, e: csv::Error| IngestError::Malformed {
        name: name.to_string(),
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    };
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| malformed(&name, e))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let wanted = column.unwrap_or("0");
    let index = resolve_index(&headers, wanted).ok_or_else(|| IngestError::MissingColumn {
        name: name.clone(),
        column: wanted.to_string(),
    })?;
    let logs = match kind {
        ValueKind::Log10 => true,
        ValueKind::Raw => false,
        ValueKind::Auto => headers.len() == 1 && headers[0] == SAMPLE_COLUMN,
    };
    let mut cleaner = Cleaner::default();
    for record in rdr.records() {
        let record = record.map_err(|e| malformed(&name, e))?;
        cleaner.push_text(record.get(index), logs);
    }
    cleaner.finish(name)
}

fn ingest_json_lines<R: Read>(
    reader: R,
    name: String,
    column: Option<&str>,
    kind: ValueKind,
) -> Result<Dataset, IngestError> {
    let logs =
        kind == ValueKind::Log10 || (kind == ValueKind::Auto && column == Some(SAMPLE_COLUMN));
    let wanted = column.unwrap_or("0");
    let mut cleaner = Cleaner::default();
    let mut seen_column = false;
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = line.map_err(|e| IngestError::Malformed {
            name: name.clone(),
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Value = serde_json::from_str(&line).map_err(|e| IngestError::Malformed {
            name: name.clone(),
            line: line_no,
            message: e.to_string(),
        })?;
        let cell = match &row {
            Value::Object(map) => map.get(wanted).or_else(|| {
                wanted
                    .parse::<usize>()
                    .ok()
                    .and_then(|i| map.values().nth(i))
            }),
            Value::Array(items) => wanted.parse::<usize>().ok().and_then(|i| items.get(i)),
            _ => None,
        };
        seen_column |= cell.is_some();
        let number = match cell {
            Some(Value::Number(n)) => n.as_f64(),
            Some(Value::String(s)) => s.trim().parse::<f64>().ok(),
            _ => None,
        };
        cleaner.push_number(number, logs);
    }
    if !seen_column && cleaner.rows > 0 {
        return Err(IngestError::MissingColumn {
            name,
            column: wanted.to_string(),
        });
    }
    cleaner.finish(name)
}
