//! JSON reports and auxiliary CSV tables.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::config::{Experiment, SimConfig};

/// One acceptance check: `value <relation> threshold`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: &'static str,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, relation: "<=", threshold, pass: value <= threshold }
    }

    pub fn lt(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, relation: "<", threshold, pass: value < threshold }
    }

    /// `|value - target| <= tol`, reported as the absolute deviation.
    pub fn near(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Check::le(name, (value - target).abs(), tol)
    }

    /// Boolean check recorded as `1 == 1`.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check { name: name.into(), value: if ok { 1.0 } else { 0.0 }, relation: "==", threshold: 1.0, pass: ok }
    }
}

/// A plot-ready table written next to the report.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|v| v.to_string()).collect());
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// What an experiment hands back before it is wrapped into a report.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub results: Value,
    pub checks: Vec<Check>,
    /// Whether the checks decide the exit code. Pre-asymptotic
    /// configurations still report their checks but do not assert them.
    pub asserted: bool,
    pub tables: Vec<Table>,
}

impl Outcome {
    pub fn new(results: Value) -> Self {
        Outcome { results, checks: Vec::new(), asserted: false, tables: Vec::new() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub experiment: Experiment,
    pub config: SimConfig,
    pub asserted: bool,
    pub pass: Option<bool>,
    pub checks: Vec<Check>,
    pub results: Value,
    pub runtime_seconds: f64,
}

impl Report {
    pub fn new(config: SimConfig, outcome: &Outcome, runtime_seconds: f64) -> Self {
        let pass = outcome.asserted.then(|| outcome.checks.iter().all(|c| c.pass));
        Report {
            experiment: config.experiment,
            config,
            asserted: outcome.asserted,
            pass,
            checks: outcome.checks.clone(),
            results: outcome.results.clone(),
            runtime_seconds,
        }
    }
}

/// `<output>.<table>.csv`.
pub fn table_path(output: &Path, table: &str) -> PathBuf {
    let mut s: OsString = output.as_os_str().to_owned();
    s.push(format!(".{table}.csv"));
    PathBuf::from(s)
}

/// Write the report (to `output` or stdout) and any tables next to it.
pub fn emit(report: &Report, tables: &[Table]) -> Result<()> {
    let json = serde_json::to_string_pretty(report)?;
    match &report.config.output {
        Some(path) => {
            fs::write(path, json + "\n").with_context(|| format!("cannot write {}", path.display()))?;
            for t in tables {
                t.write(&table_path(path, &t.name))?;
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{json}").and_then(|_| out.flush()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r.context("cannot write to stdout")?,
            }
            if !tables.is_empty() {
                log::info!("no --output given; {} table(s) not written", tables.len());
            }
        }
    }
    Ok(())
}
