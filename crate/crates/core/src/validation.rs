//! Named pass/fail checks with the first offending residual of each.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Where the first non-zero residual was found, e.g. `i=1,j=2,k=1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
    /// The first non-zero residual, rendered symbolically.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            location: None,
            residual: None,
        }
    }

    pub fn fail(name: impl Into<String>, location: impl Into<String>, residual: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: false,
            location: Some(location.into()),
            residual: Some(residual.into()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new() -> Self {
        ValidationReport::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.passed {
                writeln!(f, "PASS  {}", c.name)?;
            } else {
                writeln!(
                    f,
                    "FAIL  {}  at {}: residual {}",
                    c.name,
                    c.location.as_deref().unwrap_or("?"),
                    c.residual.as_deref().unwrap_or("?")
                )?;
            }
        }
        Ok(())
    }
}

/// Accumulates the first non-zero residual for one named check.
pub(crate) struct Residuals {
    name: String,
    first: Option<(String, String)>,
}

impl Residuals {
    pub(crate) fn new(name: impl Into<String>) -> Self {
        Residuals {
            name: name.into(),
            first: None,
        }
    }

    /// Record a residual; `render` runs only for the first failure.
    pub(crate) fn record(&mut self, is_zero: bool, location: impl FnOnce() -> String, render: impl FnOnce() -> String) {
        if !is_zero && self.first.is_none() {
            self.first = Some((location(), render()));
        }
    }

    pub(crate) fn finish(self) -> Check {
        match self.first {
            None => Check::pass(self.name),
            Some((loc, res)) => Check::fail(self.name, loc, res),
        }
    }
}
