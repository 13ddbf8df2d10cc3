//! Table output in CSV or JSON Lines.
//!
//! Every table starts with a comment row echoing the resolved configuration,
//! followed by the column names, then one record per row.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
    Empty,
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Str(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Str(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Str(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Resolved configuration as ordered `(key, value)` pairs.
pub type ConfigEcho = Vec<(String, String)>;

/// Column names, rows and the configuration they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub config: ConfigEcho,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(config: ConfigEcho, columns: &[&str]) -> Self {
        Self { config, columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, w: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Jsonl => self.write_jsonl(w),
        }
    }

    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        let echo: Vec<String> = self.config.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(w, "# {}", echo.join(" "))?;
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::text))?;
        }
        out.flush()
    }

    fn write_jsonl(&self, w: &mut dyn Write) -> io::Result<()> {
        // objects are assembled by hand to keep keys in column order
        let object = |pairs: Vec<(&str, Value)>| -> String {
            let body: Vec<String> = pairs.into_iter().map(|(k, v)| format!("{}:{}", Value::from(k), v)).collect();
            format!("{{{}}}", body.join(","))
        };
        let config = object(self.config.iter().map(|(k, v)| (k.as_str(), Value::from(v.as_str()))).collect());
        writeln!(w, "{{\"#config\":{config}}}")?;
        writeln!(w, "{{\"#columns\":{}}}", Value::from(self.columns.clone()))?;
        for row in &self.rows {
            writeln!(w, "{}", object(self.columns.iter().map(String::as_str).zip(row.iter().map(Cell::json)).collect()))?;
        }
        Ok(())
    }
}
