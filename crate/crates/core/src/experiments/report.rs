use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::{precondition, Error, Result};

/// A single report cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Real(f64),
    Text(String),
    Bool(bool),
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
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

/// Rows that render to a fixed set of columns.
pub trait Tabular {
    fn columns() -> &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::Config(format!("unknown format {s:?}; expected csv or json"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        })
    }
}

/// `v` with 12 significant digits, `%g` style.
pub fn format_real(v: f64) -> String {
    const DIGITS: usize = 12;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= DIGITS as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, v)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Int(v) => v.to_string(),
        Cell::Real(v) => format_real(*v),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(t) if t.contains([',', '"', '\n']) => format!("\"{}\"", t.replace('"', "\"\"")),
        Cell::Text(t) => t.clone(),
    }
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::Int(v) => match i64::try_from(*v) {
            Ok(i) => Value::from(i),
            Err(_) => Value::from(v.to_string()),
        },
        Cell::Real(v) => format_real(*v)
            .parse::<f64>()
            .ok()
            .and_then(serde_json::Number::from_f64)
            .map_or(Value::Null, Value::Number),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Text(t) => Value::String(t.clone()),
    }
}

impl Tabular for crate::expsums::BoundReport {
    fn columns() -> &'static [&'static str] {
        &["kind", "coefficients", "x", "M", "q", "delta", "L", "kappa", "lhs_abs", "predictor", "ratio"]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.kind.clone().into(),
            self.coefficients.clone().into(),
            self.x.into(),
            self.m.into(),
            self.q.into(),
            self.delta.into(),
            self.degree.into(),
            self.kappa.into(),
            self.lhs_abs.into(),
            self.predictor.into(),
            self.ratio.into(),
        ]
    }
}

/// Render rows as CSV (header plus one line per row) or a JSON array of objects.
pub fn render_report<T: Tabular>(rows: &[T], format: ReportFormat) -> Result<String> {
    if rows.is_empty() {
        return precondition("report needs at least one row");
    }
    let cols = T::columns();
    match format {
        ReportFormat::Csv => {
            let mut out = cols.join(",");
            out.push('\n');
            for r in rows {
                let line: Vec<String> = r.cells().iter().map(csv_cell).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            Ok(out)
        }
        ReportFormat::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let obj: Map<String, Value> =
                        cols.iter().zip(r.cells().iter()).map(|(k, c)| (k.to_string(), json_cell(c))).collect();
                    Value::Object(obj)
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&Value::Array(arr))?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Write the rendered report to `path`, or to stdout when `path` is `None`.
pub fn emit_report<T: Tabular>(rows: &[T], format: ReportFormat, path: Option<&Path>) -> Result<()> {
    let text = render_report(rows, format)?;
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
