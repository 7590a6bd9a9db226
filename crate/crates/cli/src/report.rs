//! Report documents: `{run: {command, config, version}, results: [...]}` in
//! JSON, or the results flattened to CSV rows.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use num_complex::Complex;
use serde_json::{json, Map, Number, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A float with 17 significant digits; non-finite values become `null`.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(serde_json::from_str::<Number>(&text).expect("formatted float is valid JSON"))
}

pub fn complex(z: Complex<f64>) -> Value {
    Value::Array(vec![float(z.re), float(z.im)])
}

pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub results: Vec<Value>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "run": {
                "command": self.command,
                "config": self.config,
                "version": env!("CARGO_PKG_VERSION"),
            },
            "results": self.results,
        })
    }

    pub fn to_csv(&self) -> Result<String> {
        let rows: Vec<Vec<(String, String)>> = self
            .results
            .iter()
            .map(|r| {
                let mut cells = Vec::new();
                flatten("", r, &mut cells);
                cells
            })
            .collect();
        let mut header: Vec<String> = Vec::new();
        for row in &rows {
            for (k, _) in row {
                if !header.contains(k) {
                    header.push(k.clone());
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header)?;
        for row in &rows {
            w.write_record(
                header.iter().map(|h| row.iter().find(|(k, _)| k == h).map(|(_, v)| v.as_str()).unwrap_or("")),
            )?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    /// Writes the report to `out`, or to stdout.
    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<()> {
        let text = match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json())?;
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv()?,
        };
        match out {
            Some(path) => {
                let mut f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
                f.write_all(text.as_bytes())?;
            }
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

/// Nested objects become `outer.inner` columns and arrays `name[i]`.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => flatten_map(prefix, map, out),
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), item, out);
            }
        }
        Value::Null => out.push((prefix.into(), String::new())),
        Value::String(s) => out.push((prefix.into(), s.clone())),
        other => out.push((prefix.into(), other.to_string())),
    }
}

fn flatten_map(prefix: &str, map: &Map<String, Value>, out: &mut Vec<(String, String)>) {
    for (k, v) in map {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        flatten(&key, v, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_digits() {
        assert_eq!(float(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(float(-2.0).to_string(), "-2.0000000000000000e+0");
        assert_eq!(float(f64::NAN), Value::Null);
        let back: f64 = float(std::f64::consts::PI).to_string().parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn csv_flattens_nested_values() {
        let r = Report {
            command: "t",
            config: Value::Null,
            results: vec![json!({"id": "a", "v": [1, 2], "m": {"x": null}}), json!({"id": "b", "extra": true})],
        };
        let csv = r.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "id,v[0],v[1],m.x,extra");
        assert_eq!(lines[1], "a,1,2,,");
        assert_eq!(lines[2], "b,,,,true");
    }
}
