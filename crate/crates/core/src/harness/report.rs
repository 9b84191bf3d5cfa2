use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use super::config::{ExperimentConfig, OutputFormat};
use super::fit::ConstantFit;
use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// One measured quantity.
#[derive(Debug, Clone, Serialize)]
pub struct CaseRecord {
    pub kind: String,
    pub d: usize,
    pub q: usize,
    pub j: Option<u32>,
    pub label: String,
    pub size: Option<usize>,
    pub measured: f64,
    pub bound: Option<f64>,
    pub ratio: Option<f64>,
    /// Operation-specific inputs and side results.
    pub details: Value,
}

impl CaseRecord {
    pub fn new(kind: &str, d: usize, q: usize, label: impl Into<String>, measured: f64) -> Self {
        CaseRecord {
            kind: kind.to_string(),
            d,
            q,
            j: None,
            label: label.into(),
            size: None,
            measured,
            bound: None,
            ratio: None,
            details: Value::Null,
        }
    }

    pub fn j(mut self, j: u32) -> Self {
        self.j = Some(j);
        self
    }

    pub fn size(mut self, n: usize) -> Self {
        self.size = Some(n);
        self
    }

    pub fn bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self.ratio = Some(if bound != 0.0 { self.measured / bound } else { f64::NAN });
        self
    }

    pub fn ratio(mut self, ratio: f64) -> Self {
        self.ratio = Some(ratio);
        self
    }

    pub fn details(mut self, details: impl Serialize) -> Self {
        self.details = serde_json::to_value(details).unwrap_or(Value::Null);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Recorded for inspection; does not affect the pass flag.
    pub informational: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub label: String,
    pub seconds: f64,
}

/// Everything a suite run produced.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub suite: String,
    /// The statement the suite checks, in words.
    pub statement: String,
    pub config: ExperimentConfig,
    /// Structured sets used alongside the random samples.
    pub witnesses: Vec<String>,
    pub cases: Vec<CaseRecord>,
    pub constants: BTreeMap<String, ConstantFit>,
    pub assertions: Vec<Assertion>,
    /// Skipped grid points and unavailable constructions.
    pub notices: Vec<String>,
    pub timings: Vec<Timing>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(suite: &str, statement: &str, config: &ExperimentConfig) -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            statement: statement.to_string(),
            config: config.clone(),
            witnesses: Vec::new(),
            cases: Vec::new(),
            constants: BTreeMap::new(),
            assertions: Vec::new(),
            notices: Vec::new(),
            timings: Vec::new(),
            pass: true,
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.assertions.push(Assertion { name: name.to_string(), passed, detail: detail.into(), informational: false });
        self.pass &= passed;
        passed
    }

    pub fn observe(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion { name: name.to_string(), passed, detail: detail.into(), informational: true });
    }

    pub fn notice(&mut self, text: impl Into<String>) {
        self.notices.push(text.into());
    }

    pub fn witness(&mut self, text: impl Into<String>) {
        let text = text.into();
        if !self.witnesses.contains(&text) {
            self.witnesses.push(text);
        }
    }

    /// Runs `f` and records its wall-clock time.
    pub fn timed<T>(&mut self, label: &str, f: impl FnOnce(&mut Self) -> T) -> T {
        let start = Instant::now();
        let out = f(self);
        self.timings.push(Timing { label: label.to_string(), seconds: start.elapsed().as_secs_f64() });
        out
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }

    pub fn timing(&self, label: &str) -> Option<f64> {
        self.timings.iter().find(|t| t.label == label).map(|t| t.seconds)
    }

    pub fn cases_of<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a CaseRecord> + 'a {
        self.cases.iter().filter(move |c| c.kind == kind)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    /// One row per case; `details` is embedded as a JSON string.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["suite", "kind", "d", "q", "j", "label", "size", "measured", "bound", "ratio", "details"])?;
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for c in &self.cases {
            w.write_record([
                self.suite.clone(),
                c.kind.clone(),
                c.d.to_string(),
                c.q.to_string(),
                c.j.map(|j| j.to_string()).unwrap_or_default(),
                c.label.clone(),
                c.size.map(|n| n.to_string()).unwrap_or_default(),
                c.measured.to_string(),
                opt(c.bound),
                opt(c.ratio),
                if c.details.is_null() { String::new() } else { c.details.to_string() },
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes the chosen format to `path` and the other one next to it.
    pub fn save(&self, path: &Path, format: OutputFormat) -> Result<()> {
        let (json_path, csv_path) = match format {
            OutputFormat::Json => (path.to_path_buf(), path.with_extension("csv")),
            OutputFormat::Csv => (path.with_extension("json"), path.to_path_buf()),
        };
        self.write_json(BufWriter::new(File::create(json_path)?))?;
        self.write_csv(BufWriter::new(File::create(csv_path)?))?;
        Ok(())
    }
}
