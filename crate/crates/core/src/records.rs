//! Result rows, table rendering and the plain-text result cache.
//!
//! A cache file is the CSV table itself: the header
//! `n,d,k,mode,value,source,elapsed_ms` followed by one record per line.
//! Unrestricted records store `k = 0`.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::family::{Instance, PoolSize};
use crate::value::Value;

pub const HEADER: [&str; 7] = ["n", "d", "k", "mode", "value", "source", "elapsed_ms"];

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("unknown table format {0:?} (expected plain, csv or latex)")]
    UnknownFormat(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("conflicting values for {key}: {first} vs {second}")]
    Conflict {
        key: String,
        first: Value,
        second: Value,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Fixed,
    Unrestricted,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Fixed => "fixed",
            Mode::Unrestricted => "unrestricted",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed" => Ok(Mode::Fixed),
            "unrestricted" => Ok(Mode::Unrestricted),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Solver,
    Formula,
    Strategy,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Solver => "solver",
            Source::Formula => "formula",
            Source::Strategy => "strategy",
        })
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "solver" => Ok(Source::Solver),
            "formula" => Ok(Source::Formula),
            "strategy" => Ok(Source::Strategy),
            other => Err(format!("unknown source {other:?}")),
        }
    }
}

/// One computed value; `(n, d, k, mode)` identifies it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CacheRecord {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub mode: Mode,
    pub value: Value,
    pub source: Source,
    pub elapsed_ms: u64,
}

impl CacheRecord {
    pub fn new(instance: &Instance, value: Value, source: Source, elapsed_ms: u64) -> Self {
        let (k, mode) = match instance.pools {
            PoolSize::Fixed(k) => (k, Mode::Fixed),
            PoolSize::Unrestricted => (0, Mode::Unrestricted),
        };
        CacheRecord {
            n: instance.n,
            d: instance.d,
            k,
            mode,
            value,
            source,
            elapsed_ms,
        }
    }

    pub fn key(&self) -> (usize, usize, usize, Mode) {
        (self.n, self.d, self.k, self.mode)
    }

    pub fn matches(&self, instance: &Instance) -> bool {
        let probe = CacheRecord::new(instance, self.value, self.source, 0);
        probe.key() == self.key()
    }

    fn cells(&self, infinity: &str) -> [String; 7] {
        let value = match self.value {
            Value::Infinite => infinity.to_string(),
            v => v.to_string(),
        };
        [
            self.n.to_string(),
            self.d.to_string(),
            self.k.to_string(),
            self.mode.to_string(),
            value,
            self.source.to_string(),
            self.elapsed_ms.to_string(),
        ]
    }

    fn csv_line(&self) -> String {
        self.cells("inf").join(",")
    }

    fn parse_line(line: &str, number: usize) -> Result<Self, RecordError> {
        let err = |message: String| RecordError::Parse {
            line: number,
            message,
        };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != HEADER.len() {
            return Err(err(format!(
                "expected {} fields, found {}",
                HEADER.len(),
                fields.len()
            )));
        }
        let int = |i: usize| -> Result<u64, RecordError> {
            fields[i]
                .parse::<u64>()
                .map_err(|_| err(format!("{} is not an integer: {:?}", HEADER[i], fields[i])))
        };
        Ok(CacheRecord {
            n: int(0)? as usize,
            d: int(1)? as usize,
            k: int(2)? as usize,
            mode: fields[3].parse().map_err(err)?,
            value: fields[4].parse().map_err(|e| err(format!("{e}")))?,
            source: fields[5].parse().map_err(err)?,
            elapsed_ms: int(6)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Plain,
    Csv,
    Latex,
}

impl FromStr for TableFormat {
    type Err = RecordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(TableFormat::Plain),
            "csv" => Ok(TableFormat::Csv),
            "latex" => Ok(TableFormat::Latex),
            other => Err(RecordError::UnknownFormat(other.to_string())),
        }
    }
}

/// Renders rows byte-for-byte deterministically.
pub fn render_table(rows: &[CacheRecord], format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str(&HEADER.join(","));
            out.push('\n');
            for row in rows {
                out.push_str(&row.csv_line());
                out.push('\n');
            }
        }
        TableFormat::Plain => {
            let body: Vec<[String; 7]> = rows.iter().map(|r| r.cells("inf")).collect();
            let mut widths = HEADER.map(str::len);
            for cells in &body {
                for (w, c) in widths.iter_mut().zip(cells) {
                    *w = (*w).max(c.len());
                }
            }
            let header = HEADER.map(String::from);
            for cells in std::iter::once(&header).chain(&body) {
                let line: Vec<String> = cells
                    .iter()
                    .zip(widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect();
                out.push_str(line.join("  ").trim_end());
                out.push('\n');
            }
        }
        TableFormat::Latex => {
            out.push_str("n & d & k & mode & value & source & elapsed\\_ms \\\\\n\\hline\n");
            for row in rows {
                out.push_str(&row.cells("$\\infty$").join(" & "));
                out.push_str(" \\\\\n");
            }
        }
    }
    out
}

/// Parses cache text; the header line is required.
pub fn parse_cache(text: &str) -> Result<Vec<CacheRecord>, RecordError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim() == HEADER.join(",") => {}
        Some((i, other)) => {
            return Err(RecordError::Parse {
                line: i + 1,
                message: format!("bad header {other:?}"),
            })
        }
        None => return Ok(Vec::new()),
    }
    lines
        .map(|(i, l)| CacheRecord::parse_line(l, i + 1))
        .collect()
}

pub fn read_cache(path: &Path) -> Result<Vec<CacheRecord>, RecordError> {
    match fs::read_to_string(path) {
        Ok(text) => parse_cache(&text),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Vec::new()),
        Err(e) => Err(e.into()),
    }
}

pub fn write_cache(path: &Path, records: &[CacheRecord]) -> Result<(), RecordError> {
    fs::write(path, render_table(records, TableFormat::Csv))?;
    Ok(())
}

/// Appends records, writing the header first if the file is new or empty.
pub fn append_cache(path: &Path, records: &[CacheRecord]) -> Result<(), RecordError> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    if fresh {
        writeln!(file, "{}", HEADER.join(","))?;
    }
    for r in records {
        writeln!(file, "{}", r.csv_line())?;
    }
    Ok(())
}

/// Concatenates record lists, dropping repeated keys with equal values.
///
/// Exact values are unique, so a key with two different values means some
/// computation was wrong; that is reported as a conflict.
pub fn merge_records<'a, I>(lists: I) -> Result<Vec<CacheRecord>, RecordError>
where
    I: IntoIterator<Item = &'a [CacheRecord]>,
{
    let mut merged: Vec<CacheRecord> = Vec::new();
    for list in lists {
        for rec in list {
            match merged.iter().find(|m| m.key() == rec.key()) {
                Some(prev) if prev.value != rec.value => {
                    let (n, d, k, mode) = rec.key();
                    return Err(RecordError::Conflict {
                        key: format!("n={n} d={d} k={k} {mode}"),
                        first: prev.value,
                        second: rec.value,
                    });
                }
                Some(_) => {}
                None => merged.push(*rec),
            }
        }
    }
    Ok(merged)
}
