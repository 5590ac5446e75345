//! Report tables and their CSV/JSON renderings.
//!
//! CSV output starts with `#`-prefixed metadata lines, then a header row and
//! the data rows. JSON carries the same metadata, columns and rows. Floats
//! are written with 17 significant digits so they parse back exactly.

use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i8> for Cell {
    fn from(x: i8) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_owned())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// `{:.16e}` for finite values; `inf`, `-inf` and `nan` otherwise.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(x) => json!(format_float(*x)),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Header row plus data rows, without metadata.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn rows_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.to_json())).collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

/// One command's output.
#[derive(Clone, Debug)]
pub struct Artifact {
    pub command: &'static str,
    /// Effective configuration and derived run parameters.
    pub metadata: Vec<(String, String)>,
    pub table: Table,
    /// Structured report merged into JSON output.
    pub extra: Option<Value>,
    /// Warnings for stderr.
    pub notes: Vec<String>,
    /// Set when a selftest suite failed.
    pub failure: Option<String>,
}

pub fn unix_timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl Artifact {
    pub fn new(command: &'static str, metadata: Vec<(String, String)>, table: Table) -> Self {
        Artifact { command, metadata, table, extra: None, notes: Vec::new(), failure: None }
    }

    fn header(&self, timestamp: u64) -> Vec<(String, String)> {
        let mut h = vec![
            ("tool".to_string(), format!("aperiodic {}", env!("CARGO_PKG_VERSION"))),
            ("command".to_string(), self.command.to_string()),
        ];
        h.extend(self.metadata.iter().cloned());
        h.push(("timestamp_unix".into(), timestamp.to_string()));
        h
    }

    pub fn to_csv(&self, timestamp: u64) -> String {
        let mut out = String::new();
        for (k, v) in self.header(timestamp) {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out.push_str(&self.table.to_csv());
        out
    }

    pub fn to_json(&self, timestamp: u64) -> String {
        let meta: Map<String, Value> =
            self.header(timestamp).into_iter().map(|(k, v)| (k, Value::String(v))).collect();
        let mut doc = json!({
            "metadata": meta,
            "columns": self.table.columns,
            "rows": self.table.rows_json(),
        });
        if let Some(extra) = &self.extra {
            doc["report"] = extra.clone();
        }
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable report");
        s.push('\n');
        s
    }

    /// Everything except the metadata header: what determinism is judged on.
    pub fn data(&self) -> String {
        let mut s = self.table.to_csv();
        if let Some(extra) = &self.extra {
            s.push_str(&extra.to_string());
            s.push('\n');
        }
        s
    }
}

/// Data lines of a rendered CSV artifact (metadata comments removed).
pub fn strip_metadata(csv: &str) -> String {
    csv.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect()
}
