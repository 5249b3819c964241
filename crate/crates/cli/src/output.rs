//! Document building and rendering.

use std::fmt::Write as _;

use ambicon::rational::to_decimal;
use ambicon::Rational;
use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};
use crate::io::rat_value;

pub const DECIMAL_PLACES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// An ordered JSON object with helpers for exact rationals.
#[derive(Debug, Default, Clone)]
pub struct Doc(Map<String, Value>);

impl Doc {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_map(map: Map<String, Value>) -> Self {
        Self(map)
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.0.insert(key.into(), v.into());
        self
    }

    /// `key` as an exact string and `key_decimal` rounded to 12 places.
    pub fn rat(&mut self, key: &str, r: &Rational) -> &mut Self {
        self.0.insert(key.into(), rat_value(r));
        self.0.insert(format!("{key}_decimal"), to_decimal(r, DECIMAL_PLACES).into());
        self
    }

    pub fn rats(&mut self, key: &str, rs: &[Rational]) -> &mut Self {
        self.0.insert(key.into(), rs.iter().map(rat_value).collect());
        self.0.insert(
            format!("{key}_decimal"),
            rs.iter().map(|r| Value::from(to_decimal(r, DECIMAL_PLACES))).collect(),
        );
        self
    }

    pub fn child(&mut self, key: &str, doc: Doc) -> &mut Self {
        self.0.insert(key.into(), doc.into());
        self
    }

    pub fn into_map(self) -> Map<String, Value> {
        self.0
    }
}

impl From<Doc> for Value {
    fn from(d: Doc) -> Self {
        Value::Object(d.0)
    }
}

/// Output ready to be written: a document, or a CSV table.
pub enum Rendered {
    Doc(Doc),
    Table { header: Vec<&'static str>, rows: Vec<Vec<String>> },
}

pub fn render(out: Rendered, format: Format) -> CliResult<String> {
    match (out, format) {
        (Rendered::Table { header, rows }, Format::Csv) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Domain(e.to_string());
            w.write_record(&header).map_err(io)?;
            for row in rows {
                w.write_record(&row).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Domain(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Domain(e.to_string()))
        }
        (Rendered::Table { .. }, _) => unreachable!("tables are only built for CSV"),
        (Rendered::Doc(doc), Format::Json) => {
            let mut s = serde_json::to_string_pretty(&Value::from(doc))
                .map_err(|e| CliError::Domain(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        (Rendered::Doc(doc), Format::Pretty) => {
            let mut s = String::new();
            pretty_object(&doc.0, 0, &mut s);
            Ok(s)
        }
        (Rendered::Doc(_), Format::Csv) => {
            Err(CliError::input("CSV output is only available for `solve`"))
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(_) | Value::Object(_) => None,
        other => Some(other.to_string()),
    }
}

fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    let items = v.as_array()?.iter().map(scalar).collect::<Option<Vec<_>>>()?;
    Some(format!("[{}]", items.join(", ")))
}

fn pretty_object(obj: &Map<String, Value>, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    for (key, v) in obj {
        let base = key.strip_suffix("_decimal");
        if base.is_some_and(|b| obj.contains_key(b)) {
            continue;
        }
        if let Some(text) = inline(v) {
            let approx = obj
                .get(&format!("{key}_decimal"))
                .and_then(inline)
                .filter(|_| text.contains('/'));
            match approx {
                Some(d) => writeln!(out, "{pad}{key}: {text} (~ {d})"),
                None => writeln!(out, "{pad}{key}: {text}"),
            }
            .expect("write to string");
            continue;
        }
        writeln!(out, "{pad}{key}:").expect("write to string");
        match v {
            Value::Object(child) => pretty_object(child, depth + 1, out),
            Value::Array(items) => {
                for item in items {
                    match item {
                        Value::Object(child) => {
                            writeln!(out, "{pad}  -").expect("write to string");
                            pretty_object(child, depth + 2, out);
                        }
                        other => {
                            let text = inline(other).unwrap_or_else(|| other.to_string());
                            writeln!(out, "{pad}  - {text}").expect("write to string");
                        }
                    }
                }
            }
            _ => unreachable!("scalars are inlined"),
        }
    }
}
