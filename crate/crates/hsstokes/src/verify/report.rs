//! Report containers and their deterministic JSON/CSV serialization.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

/// How a measured value is compared against its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, threshold, relation: Relation::AtMost, pass: value <= threshold }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, threshold, relation: Relation::AtLeast, pass: value >= threshold }
    }

    /// A check whose pass/fail is decided elsewhere; `value` is informational.
    pub fn flag(name: impl Into<String>, value: f64, pass: bool) -> Self {
        Self { name: name.into(), value, threshold: f64::NAN, relation: Relation::AtMost, pass }
    }
}

/// A rectangular table written as one CSV file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

/// Fixed float format used in every CSV cell.
pub fn num(x: f64) -> String {
    format!("{x:.12e}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self { suite: suite.into(), checks: Vec::new(), tables: Vec::new() }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn checks_table(&self) -> Table {
        let mut t = Table::new("checks", &["name", "value", "threshold", "relation", "pass"]);
        for c in &self.checks {
            let rel = match c.relation {
                Relation::AtMost => "le",
                Relation::AtLeast => "ge",
            };
            t.push(vec![c.name.clone(), num(c.value), num(c.threshold), rel.into(), c.pass.to_string()]);
        }
        t
    }

    /// One line per check, suitable for terminal output.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            if c.threshold.is_nan() {
                let _ = writeln!(s, "[{tag}] {}/{}: {:.4e}", self.suite, c.name, c.value);
            } else {
                let rel = if c.relation == Relation::AtMost { "<=" } else { ">=" };
                let _ = writeln!(s, "[{tag}] {}/{}: {:.4e} {rel} {:.4e}", self.suite, c.name, c.value, c.threshold);
            }
        }
        s
    }

    /// Writes `<suite>.json`, `<suite>_checks.csv` and one CSV per table.
    pub fn write(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let json = dir.join(format!("{}.json", self.suite));
        std::fs::write(&json, serde_json::to_string_pretty(self).map_err(std::io::Error::other)?)?;
        written.push(json);
        for t in std::iter::once(self.checks_table()).chain(self.tables.iter().cloned()) {
            let p = dir.join(format!("{}_{}.csv", self.suite, t.name));
            std::fs::write(&p, t.to_csv())?;
            written.push(p);
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout_and_pass_logic() {
        let mut r = SuiteReport::new("demo");
        r.check(Check::at_most("a", 1e-13, 1e-12));
        r.check(Check::at_least("b", 0.1, 0.2));
        assert!(!r.pass());
        let csv = r.checks_table().to_csv();
        assert_eq!(csv.lines().next().unwrap(), "name,value,threshold,relation,pass");
        assert!(csv.contains("a,1.000000000000e-13,1.000000000000e-12,le,true"));
        assert!(r.summary().contains("[FAIL] demo/b"));
    }
}
