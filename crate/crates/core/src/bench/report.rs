use std::fmt::Write as _;
use std::path::Path;

use super::ExperimentConfig;
use crate::{Error, Result};

/// One CSV cell. Floats are written in shortest round-trip scientific
/// notation, which is locale independent.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Real(v) => format!("{v:e}"),
            Value::Text(s) => s.clone(),
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Value::Int(v) => Some(*v as f64),
            Value::Real(v) => Some(*v),
            Value::Text(_) => None,
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i64)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

/// A table of experiment results plus free-form notes, rendered as CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    /// Extra `key = value` lines emitted as comments after the provenance.
    pub notes: Vec<(String, String)>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Report { columns: columns.to_vec(), rows: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch { expected: self.columns.len(), found: row.len() });
        }
        if let Some(Value::Text(s)) = row.iter().find(|v| matches!(v, Value::Text(s) if s.contains([',', '\n'])))
        {
            return Err(Error::invalid("row", format!("text cell `{s}` contains a separator")));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_owned(), value.to_string()));
    }

    /// Values of the named column.
    pub fn column(&self, name: &str) -> Option<Vec<Value>> {
        let j = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[j].clone()).collect())
    }

    /// CSV text with `#` provenance comments, a header row and data rows.
    pub fn to_csv(&self, config: &ExperimentConfig) -> String {
        let mut s = String::new();
        // writing to a String cannot fail
        let _ = writeln!(s, "# cvgkp {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "# experiment = {}", config.experiment);
        let _ = writeln!(s, "# seed = {}", config.seed);
        let _ = writeln!(s, "# trials = {}", config.trials);
        let _ = writeln!(s, "# config_sha256 = {}", config.hash());
        for (k, v) in &self.notes {
            let _ = writeln!(s, "# {k} = {v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Value::render).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn write(&self, config: &ExperimentConfig, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv(config))?;
        Ok(())
    }
}
