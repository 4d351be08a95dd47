//! Replays a saved report from its `config` block and compares every field of
//! `result` and `checks`, which recomputes each claimed rational exactly.

use std::io::Read;

use anyhow::{bail, Context};
use serde_json::{json, Value};

use crate::cli::{Command, RunConfig, VerifyArgs};
use crate::commands;
use crate::report::{flatten, Check, Report, SCHEMA_VERSION};

pub fn verify_cmd(a: &VerifyArgs) -> anyhow::Result<(Value, Vec<Check>)> {
    let text = if a.report.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(&a.report)
            .with_context(|| format!("reading {}", a.report.display()))?
    };
    let saved: Report = serde_json::from_str(&text).context("parsing report")?;
    let outcome = verify_report(&saved)?;
    let check = Check::new("recomputed report matches", true, outcome.mismatches.is_empty())
        .detail(format!("{} fields compared", outcome.compared));
    Ok((
        json!({
            "command": saved.command,
            "compared": outcome.compared,
            "mismatches": outcome.mismatches,
        }),
        vec![check],
    ))
}

pub struct VerifyOutcome {
    pub compared: usize,
    /// Dotted paths whose values differ, with saved and recomputed values.
    pub mismatches: Vec<Value>,
}

pub fn verify_report(saved: &Report) -> anyhow::Result<VerifyOutcome> {
    if saved.schema != SCHEMA_VERSION {
        bail!("unsupported schema version {}", saved.schema);
    }
    let config: RunConfig =
        serde_json::from_value(saved.config.clone()).context("decoding config block")?;
    if matches!(config.command, Command::Verify(_)) {
        bail!("refusing to verify a verification report");
    }
    if config.command.name() != saved.command {
        bail!(
            "config describes '{}' but the report says '{}'",
            config.command.name(),
            saved.command
        );
    }
    let fresh = commands::run(&config)?;
    let saved_fields = fields(saved);
    let fresh_fields = fields(&fresh);
    let mut mismatches = Vec::new();
    for (path, value) in &saved_fields {
        let other = fresh_fields.iter().find(|(p, _)| p == path).map(|(_, v)| v);
        if other != Some(value) {
            mismatches.push(json!({"path": path, "saved": value, "recomputed": other}));
        }
    }
    for (path, value) in &fresh_fields {
        if !saved_fields.iter().any(|(p, _)| p == path) {
            mismatches.push(json!({"path": path, "saved": null, "recomputed": value}));
        }
    }
    Ok(VerifyOutcome {
        compared: saved_fields.len(),
        mismatches,
    })
}

fn fields(r: &Report) -> Vec<(String, String)> {
    let body = json!({
        "result": r.result,
        "checks": serde_json::to_value(&r.checks).expect("checks serialize"),
    });
    flatten(&body)
}
