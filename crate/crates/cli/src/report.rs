use crate::config::Format;
use serde_json::{json, Map, Value as Json};
use std::io::Write;
use std::path::Path;

/// JSON report schema version.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Missing,
}

impl Value {
    fn csv_field(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) => v.to_string(),
            Value::Text(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
            Value::Missing => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Int(v) => json!(v),
            Value::Float(v) if v.is_finite() => json!(v),
            Value::Float(_) | Value::Missing => Json::Null,
            Value::Text(s) => json!(s),
            Value::Bool(b) => json!(b),
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i64)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Missing, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// Numeric sort key (modulus, discriminant, index, ...).
    pub key: Vec<i64>,
    pub label: String,
    pub values: Vec<Value>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: &'static str,
    pub columns: &'static [&'static str],
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn new(suite: &'static str, columns: &'static [&'static str]) -> Self {
        Self {
            suite,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, key: Vec<i64>, label: impl Into<String>, values: Vec<Value>, pass: bool) {
        assert_eq!(values.len(), self.columns.len(), "row width for {}", self.suite);
        self.rows.push(ReportRow {
            key,
            label: label.into(),
            values,
            pass,
        });
    }

    pub fn sort(&mut self) {
        self.rows
            .sort_by(|a, b| a.key.cmp(&b.key).then_with(|| a.label.cmp(&b.label)));
    }

    pub fn passes(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failing(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    /// Column index by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn to_csv(&self) -> std::io::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["label"];
        header.extend_from_slice(self.columns);
        header.push("pass");
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.label.clone()];
            rec.extend(r.values.iter().map(Value::csv_field));
            rec.push(r.pass.to_string());
            w.write_record(&rec)?;
        }
        w.into_inner().map_err(|e| e.into_error())
    }

    pub fn to_json(&self) -> Vec<u8> {
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|r| {
                let mut values = Map::new();
                for (c, v) in self.columns.iter().zip(&r.values) {
                    values.insert((*c).to_string(), v.json());
                }
                json!({ "label": r.label, "values": values, "pass": r.pass })
            })
            .collect();
        let doc = json!({
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "columns": self.columns,
            "pass": self.passes(),
            "rows": rows,
        });
        let mut out = serde_json::to_vec_pretty(&doc).expect("report serializes");
        out.push(b'\n');
        out
    }

    pub fn render(&self, format: Format) -> std::io::Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }

    /// Write to a temporary file next to `path`, then rename over it.
    pub fn write_atomic(&self, path: &Path, format: Format) -> std::io::Result<()> {
        let bytes = self.render(format)?;
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(&bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }
}
