//! Report assembly and rendering.

use std::fmt::Write;

use serde_json::{json, Map, Value};
use wittlab::series::PoincareSeries;
use wittlab::verify::{Check, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A rational function reproducing `dims`, when the tail past degree `r` is constant.
///
/// With `dims[i] = c` for `r < i ≤ cutoff` this is
/// `((1 - t)·Σ_{i ≤ r} dims[i] tⁱ + c t^{r+1}) / (1 - t)`, or the polynomial itself when `c = 0`.
pub fn fit_rational(dims: &[u64], r: usize) -> Option<PoincareSeries> {
    let tail = dims.get(r + 1..)?;
    let c = *tail.first()?;
    if tail.len() < 2 || tail.iter().any(|&d| d != c) {
        return None;
    }
    let head: Vec<i64> = dims[..=r].iter().map(|&d| d as i64).collect();
    if c == 0 {
        return Some(PoincareSeries::polynomial(
            head.iter().map(|&x| x.into()).collect(),
        ));
    }
    let mut num = vec![0i64; r + 2];
    for (i, &d) in head.iter().enumerate() {
        num[i] += d;
        num[i + 1] -= d;
    }
    num[r + 1] += c as i64;
    Some(PoincareSeries::new(
        num.iter().map(|&x| x.into()).collect(),
        &[(1, 1)],
    ))
}

pub fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Report => "report",
        Status::Skipped => "skipped",
    }
}

/// Overall status: any failure fails; otherwise pass if something passed,
/// report if only reports, and `computed` when nothing was compared.
pub fn overall(checks: &[Check]) -> &'static str {
    if checks.iter().any(|c| c.status == Status::Fail) {
        "fail"
    } else if checks.iter().any(|c| c.status == Status::Pass) {
        "pass"
    } else if checks.iter().any(|c| c.status == Status::Report) {
        "report"
    } else {
        "computed"
    }
}

pub fn checks_json(checks: &[Check]) -> Value {
    Value::Array(checks.iter().map(|c| json!(c)).collect())
}

pub struct Report {
    pub fields: Map<String, Value>,
    /// Rows for CSV output, header first.
    pub csv: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), json!(command));
        Self {
            fields,
            csv: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.fields.insert(key.into(), value);
    }

    pub fn status(&self) -> &str {
        self.fields
            .get("status")
            .and_then(Value::as_str)
            .unwrap_or("computed")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.fields).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::new();
                for row in &self.csv {
                    let _ = writeln!(s, "{}", row.join(","));
                }
                s
            }
            Format::Text => {
                let mut s = String::new();
                for (k, v) in &self.fields {
                    match v {
                        Value::Array(items) if items.iter().any(Value::is_object) => {
                            let _ = writeln!(s, "{k}:");
                            for item in items {
                                let _ = writeln!(s, "  {}", text_line(item));
                            }
                        }
                        _ => {
                            let _ = writeln!(s, "{k}: {}", text_value(v));
                        }
                    }
                }
                s
            }
        }
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(text_value).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn text_line(item: &Value) -> String {
    match (item.get("status"), item.get("name")) {
        (Some(st), Some(name)) => format!(
            "[{}] {}: expected {}, computed {}",
            text_value(st),
            text_value(name),
            item["expected"],
            item["computed"]
        ),
        _ => item.to_string(),
    }
}
