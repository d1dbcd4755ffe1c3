//! The report envelope shared by every subcommand, and its renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::Format;

/// Bumped on any change to the envelope or to a result payload.
pub const SCHEMA_VERSION: u32 = 1;

/// The JSON Schema every report validates against.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The checked statement holds on this input or range.
    Verified,
    /// A counterexample to the statement under test.
    Refuted,
    /// The given instance fails a condition; says nothing about a conjecture.
    RefutedInstance,
    Found,
    NotFound,
    ReportOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub problem: String,
    pub parameters: BTreeMap<String, Value>,
    pub result: Value,
    pub verdict: Verdict,
    pub seed: u64,
    pub runtime_ms: u64,
    pub tool_version: String,
}

/// Rows for `--format csv` when a command has a natural table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// What a command computes, before timing and provenance are attached.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub problem: &'static str,
    pub parameters: BTreeMap<String, Value>,
    pub result: Value,
    pub verdict: Verdict,
    pub table: Option<Table>,
}

impl Experiment {
    pub fn new(problem: &'static str, result: impl Serialize, verdict: Verdict) -> Self {
        Self {
            problem,
            parameters: BTreeMap::new(),
            result: serde_json::to_value(result).expect("results serialize"),
            verdict,
            table: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters
            .insert(key.to_owned(), serde_json::to_value(value).expect("parameters serialize"));
        self
    }

    pub fn table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }
}

pub fn render(report: &ExperimentReport, table: Option<&Table>, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => match table {
            Some(t) => csv(&t.header, &t.rows),
            None => {
                let rows = leaves(&report.result).into_iter().map(|(k, v)| vec![k, v]).collect::<Vec<_>>();
                csv(&["field".into(), "value".into()], &rows)
            }
        },
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "problem: {}", report.problem);
            let _ = writeln!(s, "verdict: {}", verdict_name(report.verdict));
            for (k, v) in &report.parameters {
                let _ = writeln!(s, "param {k}: {}", scalar(v));
            }
            for (k, v) in leaves(&report.result) {
                let _ = writeln!(s, "{k}: {v}");
            }
            let _ = writeln!(s, "seed: {}", report.seed);
            let _ = writeln!(s, "runtime_ms: {}", report.runtime_ms);
            let _ = writeln!(s, "tool_version: {}", report.tool_version);
            s
        }
    }
}

pub fn verdict_name(v: Verdict) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Flattens a JSON value to `(dotted.path, scalar)` pairs.
fn leaves(v: &Value) -> Vec<(String, String)> {
    fn go(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_owned() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, v)| go(&join(k), v, out)),
            Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                items.iter().enumerate().for_each(|(i, v)| go(&join(&i.to_string()), v, out))
            }
            other => out.push((if prefix.is_empty() { "value".into() } else { prefix.to_owned() }, scalar(other))),
        }
    }
    let mut out = Vec::new();
    go("", v, &mut out);
    out
}

fn csv(header: &[String], rows: &[Vec<String>]) -> String {
    let field = |f: &String| {
        if f.contains([',', '"', '\n']) {
            format!("\"{}\"", f.replace('"', "\"\""))
        } else {
            f.clone()
        }
    };
    let mut s = String::new();
    for row in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        let _ = writeln!(s, "{}", row.iter().map(field).collect::<Vec<_>>().join(","));
    }
    s
}
