//! Rendering of command results as JSON, CSV or markdown.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use ginbound::survey::ReportFormat;
use serde_json::{Map, Value};

/// Renders a JSON value. Arrays of objects become tables; a single object
/// becomes a two-column `key,value` table.
pub fn render(value: &Value, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => Ok(serde_json::to_string_pretty(value)? + "\n"),
        ReportFormat::Csv => {
            let (header, rows) = table(value);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header)?;
            for row in rows {
                w.write_record(&row)?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        ReportFormat::Markdown => {
            let (header, rows) = table(value);
            let mut out = String::new();
            writeln!(out, "| {} |", header.join(" | "))?;
            writeln!(out, "|{}", "---|".repeat(header.len()))?;
            for row in rows {
                writeln!(out, "| {} |", row.join(" | "))?;
            }
            Ok(out)
        }
    }
}

fn table(value: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    match value {
        Value::Array(items) if items.iter().all(Value::is_object) => {
            let header: Vec<String> = items
                .first()
                .and_then(Value::as_object)
                .map(|m| m.keys().cloned().collect())
                .unwrap_or_default();
            let rows = items
                .iter()
                .filter_map(Value::as_object)
                .map(|m| header.iter().map(|k| cell(m.get(k).unwrap_or(&Value::Null))).collect())
                .collect();
            (header, rows)
        }
        Value::Object(m) => {
            let rows = m.iter().map(|(k, v)| vec![k.clone(), cell(v)]).collect();
            (vec!["key".into(), "value".into()], rows)
        }
        other => (vec!["value".into()], vec![vec![cell(other)]]),
    }
}

/// Strings print bare, integer lists as `13,11,9,7,6`, nulls as empty.
fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(xs) if xs.iter().all(Value::is_number) => {
            xs.iter().map(Value::to_string).collect::<Vec<_>>().join(",")
        }
        other => other.to_string(),
    }
}

/// Builds a JSON object that keeps the given key order.
pub fn object<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

/// Prints `text`, or writes it to `dir/name` when an output directory is set.
pub fn emit(text: &str, out: Option<&Path>, name: &str) -> Result<()> {
    match out {
        Some(dir) => write_file(&dir.join(name), text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
