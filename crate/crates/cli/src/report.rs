use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliResult;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Outcome of one command: checks, structured data and written files.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub seed: Option<u64>,
    pub precision: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub data: Map<String, Value>,
    pub artifacts: Vec<String>,
    /// Wall-clock seconds per phase; only serialized on request.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub timings: BTreeMap<String, f64>,
    #[serde(skip)]
    pub summary: Vec<String>,
    #[serde(skip)]
    started: Option<Instant>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, seed: Option<u64>, precision: usize) -> Self {
        RunReport {
            command: command.into(),
            seed,
            precision,
            passed: true,
            checks: Vec::new(),
            data: Map::new(),
            artifacts: Vec::new(),
            timings: BTreeMap::new(),
            summary: Vec::new(),
            started: Some(Instant::now()),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool) -> &mut Self {
        self.checks.push(Check { name: name.into(), pass, detail: None });
        self.passed &= pass;
        self
    }

    pub fn check_detail(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> &mut Self {
        self.checks.push(Check { name: name.into(), pass, detail: Some(detail.into()) });
        self.passed &= pass;
        self
    }

    pub fn data(&mut self, key: &str, value: impl Serialize) -> CliResult<&mut Self> {
        self.data.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(self)
    }

    pub fn artifact(&mut self, path: impl Into<String>) -> &mut Self {
        self.artifacts.push(path.into());
        self
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.summary.push(text.into());
        self
    }

    /// Records the time since the report was created under `total`.
    pub fn finish(mut self) -> Self {
        if let Some(t) = self.started.take() {
            self.timings.insert("total".into(), t.elapsed().as_secs_f64());
        }
        self
    }

    /// Folds a finished sub-report in, prefixing its check names.
    pub fn merge(&mut self, name: &str, sub: RunReport) {
        for c in &sub.checks {
            self.checks.push(Check { name: format!("{name}/{}", c.name), ..c.clone() });
        }
        self.passed &= sub.passed;
        for (k, v) in &sub.timings {
            self.timings.insert(format!("{name}/{k}"), *v);
        }
        self.artifacts.extend(sub.artifacts.iter().cloned());
        self.summary.extend(sub.summary.iter().map(|l| format!("[{name}] {l}")));
        self.data.insert(name.to_string(), Value::Object(sub.data));
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            crate::EXIT_PASS
        } else {
            crate::EXIT_FAILURE
        }
    }

    pub fn to_json(&self, with_timings: bool) -> CliResult<String> {
        if with_timings {
            return Ok(serde_json::to_string_pretty(self)?);
        }
        let mut stripped = self.clone();
        stripped.timings.clear();
        Ok(serde_json::to_string_pretty(&stripped)?)
    }

    pub fn to_text(&self, with_timings: bool) -> String {
        let mut out = String::new();
        let seed = self.seed.map(|s| format!("seed {s}, ")).unwrap_or_default();
        let _ = writeln!(out, "{} ({seed}{} bits)", self.command, self.precision);
        for l in &self.summary {
            let _ = writeln!(out, "  {l}");
        }
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            match &c.detail {
                Some(d) => writeln!(out, "  {tag} {} ({d})", c.name),
                None => writeln!(out, "  {tag} {}", c.name),
            }
            .expect("writing to a String");
        }
        for a in &self.artifacts {
            let _ = writeln!(out, "  wrote {a}");
        }
        if with_timings {
            for (k, v) in &self.timings {
                let _ = writeln!(out, "  time {k}: {v:.3}s");
            }
        }
        let _ = writeln!(out, "{}", if self.passed { "ok" } else { "FAILED" });
        out
    }
}
