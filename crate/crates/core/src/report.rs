//! Reports emitted by the command line front end.
//!
//! JSON layout (stable; fields in this order):
//!
//! ```json
//! {
//!   "command": "atiyah",
//!   "input": "fixtures/line_action.json",
//!   "max_b_degree": 4,
//!   "passed": true,
//!   "checks": [{"name": "pullback_comparison", "passed": true}],
//!   "sections": [{"title": "lie_pair_cocycle", "entries": [{"key": "[a1;1,1->1]", "value": "2*x1"}]}],
//!   "timings_ms": {"load": 0.4}
//! }
//! ```
//!
//! Failing checks also carry `location` and `residual`. `timings_ms` is only
//! present when timings were requested, so reports are otherwise
//! byte-for-byte reproducible.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::validation::{Check, ValidationReport};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

/// A titled list of symbolic values, e.g. the components of `X_3`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Section {
    pub title: String,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Section {
            title: title.into(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.push(Entry {
            key: key.into(),
            value: value.into(),
        });
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|e| e.key == key).map(|e| e.value.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub max_b_degree: u32,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub sections: Vec<Section>,
    #[serde(rename = "timings_ms", skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(command: impl Into<String>, input: impl Into<String>, max_b_degree: u32) -> Self {
        Report {
            command: command.into(),
            input: input.into(),
            max_b_degree,
            passed: true,
            checks: Vec::new(),
            sections: Vec::new(),
            timings: None,
        }
    }

    pub fn add_checks(&mut self, report: ValidationReport) {
        self.checks.extend(report.checks);
        self.passed = self.checks.iter().all(|c| c.passed);
    }

    pub fn add_section(&mut self, section: Section) {
        self.sections.push(section);
    }

    pub fn section(&self, title: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.title == title)
    }

    pub fn record_timing(&mut self, phase: &str, ms: f64) {
        self.timings.get_or_insert_with(BTreeMap::new).insert(phase.to_string(), ms);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} (max b-degree {})", self.command, self.input, self.max_b_degree)?;
        for s in &self.sections {
            writeln!(f, "\n[{}]", s.title)?;
            if s.entries.is_empty() {
                writeln!(f, "  (empty)")?;
            }
            for e in &s.entries {
                writeln!(f, "  {} = {}", e.key, e.value)?;
            }
        }
        if !self.checks.is_empty() {
            writeln!(f, "\n[checks]")?;
            let mut body = String::new();
            write!(body, "{}", ValidationReport { checks: self.checks.clone() })?;
            for line in body.lines() {
                writeln!(f, "  {line}")?;
            }
        }
        if let Some(t) = &self.timings {
            writeln!(f, "\n[timings_ms]")?;
            for (k, v) in t {
                writeln!(f, "  {k} = {v:.3}")?;
            }
        }
        writeln!(f, "\n{}", if self.passed { "RESULT: PASS" } else { "RESULT: FAIL" })
    }
}
