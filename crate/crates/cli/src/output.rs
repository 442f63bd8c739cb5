use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub output: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record the wall-clock time (Unix seconds) in the metadata. Off by
    /// default so that repeated runs are byte-identical.
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => format!("{:.16e}", if *v == 0.0 { 0.0 } else { *v }),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(v) => serde_json::Number::from_f64(*v)
                .map(Value::Number)
                .unwrap_or(Value::Null),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
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

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map(Into::into).unwrap_or(Cell::Empty)
    }
}

/// A result table plus everything needed to reproduce it.
pub struct Envelope {
    pub metadata: Vec<(String, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Cell)>,
}

impl Envelope {
    pub fn new(command: &str, columns: Vec<&'static str>) -> Self {
        Envelope {
            metadata: vec![
                ("tool".into(), Cell::from("wirescat")),
                ("version".into(), Cell::from(env!("CARGO_PKG_VERSION"))),
                ("command".into(), Cell::from(command)),
            ],
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.metadata.push((key.to_string(), value.into()));
    }

    pub fn summary(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> Result<Vec<u8>, String> {
        let mut buf = Vec::new();
        for (k, v) in &self.metadata {
            writeln!(buf, "# {k}={}", v.csv()).map_err(|e| e.to_string())?;
        }
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&self.columns).map_err(|e| e.to_string())?;
            for row in &self.rows {
                w.write_record(row.iter().map(Cell::csv))
                    .map_err(|e| e.to_string())?;
            }
            w.flush().map_err(|e| e.to_string())?;
        }
        for (k, v) in &self.summary {
            writeln!(buf, "# {k}={}", v.csv()).map_err(|e| e.to_string())?;
        }
        Ok(buf)
    }

    fn to_json(&self) -> Result<Vec<u8>, String> {
        let pairs = |items: &[(String, Cell)]| {
            items
                .iter()
                .map(|(k, v)| (k.clone(), v.json()))
                .collect::<Map<String, Value>>()
        };
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect(),
                )
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("metadata".into(), Value::Object(pairs(&self.metadata)));
        doc.insert("rows".into(), Value::Array(rows));
        doc.insert("summary".into(), Value::Object(pairs(&self.summary)));
        let mut out = serde_json::to_vec_pretty(&Value::Object(doc)).map_err(|e| e.to_string())?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn emit(mut self, args: &OutputArgs) -> Result<(), String> {
        if args.timestamp {
            let now = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            self.meta("timestamp", now);
        }
        let bytes = match args.output {
            Format::Csv => self.to_csv()?,
            Format::Json => self.to_json()?,
        };
        match &args.out {
            Some(path) => std::fs::write(path, bytes)
                .map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| e.to_string()),
        }
    }
}
