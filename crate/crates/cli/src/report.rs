//! Tabular output in CSV or JSON, the run echo, and reading earlier reports
//! back in.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(usize),
    /// Written empty (CSV) or null (JSON) when NaN.
    Num(f64),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(v) if v.is_nan() => String::new(),
            Cell::Num(v) => v.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(i) => Value::from(*i),
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Writes `<stem>.csv` or `<stem>.json` into `dir`.
    pub fn write(&self, dir: &Path, stem: &str, format: Format) -> anyhow::Result<PathBuf> {
        let path = dir.join(format!("{stem}.{}", format.extension()));
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_path(&path)
                    .with_context(|| format!("cannot create {}", path.display()))?;
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .cloned()
                            .zip(row.iter().map(Cell::json))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                write_json(&path, &records)?;
            }
        }
        Ok(path)
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn prepare_out(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))
        .map_err(Failure::User)
}

/// Echoes the resolved configuration next to the outputs.
pub fn write_run_config<T: Serialize>(dir: &Path, command: &str, config: &T) -> anyhow::Result<()> {
    #[derive(Serialize)]
    struct Echo<'a, T> {
        tool: &'static str,
        version: &'static str,
        command: &'a str,
        config: &'a T,
    }
    write_json(
        &dir.join("run_config.json"),
        &Echo {
            tool: env!("CARGO_BIN_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
        },
    )
}

/// Reads a report written by [`Table::write`], either format, as rows of
/// column → text.
pub fn read_table(path: &Path) -> anyhow::Result<Vec<BTreeMap<String, String>>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    if path.extension().is_some_and(|e| e == "json") {
        let value: Value = serde_json::from_str(&text)
            .with_context(|| format!("{} is not valid JSON", path.display()))?;
        let Value::Array(items) = value else {
            bail!("{}: expected an array of records", path.display());
        };
        items
            .into_iter()
            .enumerate()
            .map(|(i, item)| match item {
                Value::Object(obj) => Ok(obj
                    .into_iter()
                    .map(|(k, v)| {
                        let s = match v {
                            Value::String(s) => s,
                            Value::Null => String::new(),
                            other => other.to_string(),
                        };
                        (k, s)
                    })
                    .collect()),
                _ => bail!("{}: record {} is not an object", path.display(), i + 1),
            })
            .collect()
    } else {
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let headers = rdr.headers()?.clone();
        rdr.records()
            .map(|r| {
                let r = r.with_context(|| format!("malformed row in {}", path.display()))?;
                Ok(headers
                    .iter()
                    .map(str::to_string)
                    .zip(r.iter().map(str::to_string))
                    .collect())
            })
            .collect()
    }
}

/// Column `name` of a report row, or an error naming the row.
pub fn field<'a>(
    row: &'a BTreeMap<String, String>,
    name: &str,
    line: usize,
) -> anyhow::Result<&'a str> {
    row.get(name)
        .map(String::as_str)
        .with_context(|| format!("record {line}: missing column `{name}`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(["dmu", "rho", "rank"]);
        t.push(vec!["A".into(), 0.5.into(), 1.into()]);
        t.push(vec!["B".into(), f64::NAN.into(), 2.into()]);
        t
    }

    #[test]
    fn csv_and_json_read_back_alike() {
        let dir = tempfile::tempdir().unwrap();
        for format in [Format::Csv, Format::Json] {
            let path = sample().write(dir.path(), "t", format).unwrap();
            let rows = read_table(&path).unwrap();
            assert_eq!(rows.len(), 2);
            assert_eq!(rows[0]["rho"], "0.5");
            assert_eq!(rows[1]["rho"], "");
            assert_eq!(rows[1]["rank"], "2");
        }
    }

    #[test]
    fn missing_column_is_named() {
        let row = BTreeMap::new();
        let err = field(&row, "rho", 3).unwrap_err();
        assert!(err.to_string().contains("`rho`"));
    }
}
