//! Tabular dataset writer: CSV with a `#`-prefixed JSON header, or a single
//! JSON document. Numbers carry 12 significant digits; line endings are LF.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::states::StateSpec;

pub const ARTIFACT: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

/// `%.12g`: 12 significant digits, trailing zeros dropped, exponent form
/// outside `[1e-5, 1e12)`.
pub fn format_g12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" { "0".into() } else { t.to_string() }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_g12(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => {
                let rounded: f64 = format_g12(*x).parse().expect("formatted float parses");
                json!(rounded)
            }
            Cell::Num(x) => Value::String(format_g12(*x)),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
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

/// Provenance carried by every emitted file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Header {
    pub artifact: &'static str,
    pub version: &'static str,
    pub command: String,
    pub specs: Vec<StateSpec>,
    pub grid: Map<String, Value>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Header {
    pub fn new(command: impl Into<String>, specs: Vec<StateSpec>, tolerance: f64) -> Self {
        Self {
            artifact: ARTIFACT,
            version: VERSION,
            command: command.into(),
            specs,
            grid: Map::new(),
            tolerance,
            method: None,
            notes: Vec::new(),
        }
    }

    pub fn grid_entry(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.grid.insert(key.to_string(), value.into());
        self
    }

    pub fn method(mut self, method: impl Into<String>) -> Self {
        self.method = Some(method.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Header,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Header, columns: &[&str]) -> Self {
        Self {
            header,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header = serde_json::to_string(&self.header).expect("header serializes");
        writeln!(out, "# {header}").unwrap();
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
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
        let doc = json!({ "header": self.header, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Writes to `path`, or stdout when `path` is `None`.
    pub fn write(&self, format: Format, path: Option<&Path>) -> io::Result<()> {
        let text = self.render(format);
        match path {
            Some(p) => fs::write(p, text),
            None => io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12_formatting() {
        assert_eq!(format_g12(0.0), "0");
        assert_eq!(format_g12(1.0), "1");
        assert_eq!(format_g12(-2.5), "-2.5");
        assert_eq!(format_g12(10.0), "10");
        assert_eq!(format_g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_g12(std::f64::consts::PI * 1e4), "31415.9265359");
        assert_eq!(format_g12(1.5e-7), "1.5e-07");
        assert_eq!(format_g12(6.02214076e23), "6.02214076e+23");
        assert_eq!(format_g12(0.0001), "0.0001");
        assert_eq!(format_g12(-1e-300), "-1e-300");
        assert_eq!(format_g12(999999999999.9), "1e+12");
    }

    #[test]
    fn csv_layout() {
        let spec = StateSpec::padfs(1, 1, 1.0, 0.0);
        let header = Header::new("phase-dist", vec![spec], 1e-12).grid_entry("theta", 4);
        let mut t = Table::new(header, &["param", "theta", "density"]);
        t.push(vec!["u=1".into(), 0.5.into(), (1.0 / 3.0).into()]);
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# {\"artifact\":\"fockphase\""));
        assert!(lines[0].contains("\"kind\":\"add\""));
        assert_eq!(lines[1], "param,theta,density");
        assert_eq!(lines[2], "u=1,0.5,0.333333333333");
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn json_layout() {
        let header = Header::new("dispersion", vec![], 1e-12);
        let mut t = Table::new(header, &["x", "label"]);
        t.push(vec![(2.0f64 / 3.0).into(), "a,b".into()]);
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["rows"][0]["x"], json!(0.666666666667));
        assert_eq!(v["rows"][0]["label"], json!("a,b"));
        assert_eq!(v["header"]["command"], json!("dispersion"));
        assert!(t.to_csv().contains("\"a,b\""));
    }
}
