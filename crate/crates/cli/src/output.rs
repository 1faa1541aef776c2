use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

/// Flat records ready for any output format. A single-record report prints
/// as a JSON object, anything else as an array.
#[derive(Debug, Default)]
pub struct Report {
    pub rows: Vec<Map<String, Value>>,
    pub single: bool,
    /// Set when the command ran but its check did not hold.
    pub failure: Option<String>,
}

impl Report {
    pub fn one(row: impl Serialize) -> Self {
        Report {
            rows: vec![to_map(row)],
            single: true,
            failure: None,
        }
    }

    pub fn many<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Self {
        Report {
            rows: rows.into_iter().map(to_map).collect(),
            single: false,
            failure: None,
        }
    }
}

fn to_map(row: impl Serialize) -> Map<String, Value> {
    match serde_json::to_value(row).expect("records serialize to JSON") {
        Value::Object(m) => m,
        other => panic!("record is not a JSON object: {other}"),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

pub fn emit(report: &Report, format: Format) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            let text = if report.single && report.rows.len() == 1 {
                serde_json::to_string_pretty(&report.rows[0])
            } else {
                serde_json::to_string_pretty(&report.rows)
            };
            writeln!(out, "{}", text.map_err(io::Error::other)?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if let Some(first) = report.rows.first() {
                w.write_record(first.keys())?;
            }
            for row in &report.rows {
                w.write_record(row.values().map(cell))?;
            }
            w.flush()?;
        }
        Format::Plain => {
            for (i, row) in report.rows.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                for (key, value) in row {
                    writeln!(out, "{key}: {}", cell(value))?;
                }
            }
        }
    }
    Ok(())
}
