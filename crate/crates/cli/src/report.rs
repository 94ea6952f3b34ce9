//! Report records and their JSON/CSV encodings.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

pub const SCHEMA_VERSION: u32 = 1;

fn finite_or_null<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(serialize_with = "finite_or_null")]
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `residual ≤ tolerance`. NaN and infinity fail.
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
        }
    }

    /// A lower-bound witness `value > threshold`, stored as threshold/value ≤ 1 - ε
    /// so that every residual stays below its tolerance on success.
    pub fn separation(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        let residual = if value > 0.0 { threshold / value } else { f64::INFINITY };
        let mut c = Check::new(name, residual, 1.0);
        c.pass = residual < 1.0;
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub id: String,
    pub task: String,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<Check>,
    /// Diagnostics: truncation tails, raw defects, dimensions.
    pub values: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(id: impl Into<String>, task: impl Into<String>, seed: u64) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            id: id.into(),
            task: task.into(),
            seed,
            pass: true,
            checks: Vec::new(),
            values: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn check(&mut self, c: Check) -> &mut Self {
        self.pass &= c.pass;
        self.checks.push(c);
        self
    }

    pub fn value(&mut self, name: impl Into<String>, x: f64) -> &mut Self {
        self.values.insert(name.into(), x);
        self
    }

    pub fn note(&mut self, s: impl Into<String>) -> &mut Self {
        self.notes.push(s.into());
        self
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        reports_to_csv(std::slice::from_ref(self))
    }
}

/// One row per check: id, task, check, residual, tolerance, pass.
pub fn reports_to_csv(reports: &[Report]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["id", "task", "check", "residual", "tolerance", "pass"])
        .expect("in-memory write");
    for r in reports {
        for c in &r.checks {
            let residual = if c.residual.is_finite() {
                format!("{:e}", c.residual)
            } else {
                String::new()
            };
            w.write_record([
                r.id.as_str(),
                r.task.as_str(),
                c.name.as_str(),
                &residual,
                &format!("{:e}", c.tolerance),
                if c.pass { "true" } else { "false" },
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
