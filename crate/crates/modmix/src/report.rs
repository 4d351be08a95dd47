//! The report envelope and its JSON, CSV and text renderings.
//!
//! Every report is `{"schema": 1, "command", "config", "result", "checks"}`.
//! Rationals are `"num/den"` strings in lowest terms. Objects serialize with
//! sorted keys, so identical runs give byte-identical JSON.

use std::fmt::Write as _;

use clap::ValueEnum;
use modmix_core::rational::to_fraction_string;
use modmix_core::Rational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Whether the inequality is claimed under the given inputs. Unasserted
    /// checks are informational and never affect the exit status.
    pub asserted: bool,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, asserted: bool, holds: bool) -> Self {
        Self {
            name: name.into(),
            asserted,
            holds,
            lhs: None,
            rhs: None,
            detail: None,
        }
    }

    pub fn sides(mut self, lhs: &Rational, rhs: &Rational) -> Self {
        self.lhs = Some(rat(lhs));
        self.rhs = Some(rat(rhs));
        self
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn failed(&self) -> bool {
        self.asserted && !self.holds
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub config: Value,
    pub result: Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, config: Value, result: Value, checks: Vec<Check>) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            config,
            result,
            checks,
        }
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(Check::failed)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("values serialize");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Text => self.to_text(),
        }
    }

    /// `section,key,value` rows, with nested keys joined by dots.
    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut row = |section: &str, key: &str, value: &str| {
            w.write_record([section, key, value]).expect("in-memory write");
        };
        row("section", "key", "value");
        row("meta", "schema", &self.schema.to_string());
        row("meta", "command", &self.command);
        for (k, v) in flatten(&self.result) {
            row("result", &k, &v);
        }
        for c in &self.checks {
            row("check", &c.name, status(c));
            if let (Some(l), Some(r)) = (&c.lhs, &c.rhs) {
                row("check", &format!("{}.lhs", c.name), l);
                row("check", &format!("{}.rhs", c.name), r);
            }
        }
        String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
    }

    fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.command);
        for (k, v) in flatten(&self.result) {
            let _ = writeln!(s, "  {k} = {v}");
        }
        for c in &self.checks {
            let _ = write!(s, "{} {}", status(c), c.name);
            if let (Some(l), Some(r)) = (&c.lhs, &c.rhs) {
                let _ = write!(s, ": {l} <= {r}");
            }
            if let Some(d) = &c.detail {
                let _ = write!(s, " ({d})");
            }
            s.push('\n');
        }
        s
    }
}

fn status(c: &Check) -> &'static str {
    match (c.asserted, c.holds) {
        (true, true) => "PASS",
        (true, false) => "FAIL",
        (false, true) => "INFO-HOLDS",
        (false, false) => "INFO-FAILS",
    }
}

/// Leaves of a JSON value keyed by dotted paths, in document order.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, v)| walk(&join(k), v, out)),
            Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
                let parts: Vec<String> = items.iter().map(scalar).collect();
                out.push((prefix.to_string(), parts.join(" ")));
            }
            Value::Array(items) => items
                .iter()
                .enumerate()
                .for_each(|(i, v)| walk(&join(&i.to_string()), v, out)),
            other => out.push((prefix.to_string(), scalar(other))),
        }
    }
    let mut out = Vec::new();
    walk("", value, &mut out);
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// `"num/den"` in lowest terms.
pub fn rat(r: &Rational) -> String {
    to_fraction_string(r)
}

pub fn opt_rat(r: Option<&Rational>) -> Value {
    r.map_or(Value::Null, |r| Value::String(rat(r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use modmix_core::rational::ratio;
    use serde_json::json;

    fn sample() -> Report {
        Report::new(
            "average",
            json!({"n": 15}),
            json!({"average": rat(&ratio(2, 225)), "witness": [0, 7], "terms": [{"m": 1}]}),
            vec![Check::new("bound", true, false).sides(&ratio(1, 2), &ratio(1, 3))],
        )
    }

    #[test]
    fn json_round_trips() {
        let r = sample();
        let text = r.render(OutputFormat::Json);
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert!(text.contains("\"schema\": 1"));
        assert!(text.contains("\"2/225\""));
        assert!(r.any_failed());
    }

    #[test]
    fn csv_and_text() {
        let r = sample();
        let csv = r.render(OutputFormat::Csv);
        assert!(csv.starts_with("section,key,value\n"));
        assert!(csv.contains("result,witness,0 7\n"));
        assert!(csv.contains("result,terms.0.m,1\n"));
        assert!(csv.contains("check,bound,FAIL\n"));
        let text = r.render(OutputFormat::Text);
        assert!(text.contains("FAIL bound: 1/2 <= 1/3"));
    }
}
