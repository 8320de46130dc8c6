use std::collections::BTreeMap;
use std::fmt::Write as _;

use opmodel::Tolerances;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Status {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

/// One verdict with the quantity it was decided on.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub value: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes when `value <= tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, value <= tolerance, value, tolerance)
    }

    pub fn new(name: impl Into<String>, pass: bool, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), status: Status::from_bool(pass), value, tolerance, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub label: String,
    pub source: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(label: impl Into<String>, source: impl Into<String>, bytes: &[u8]) -> Self {
        let digest = Sha256::digest(bytes);
        let sha256 = digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        });
        InputDigest { label: label.into(), source: source.into(), sha256 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub inputs: Vec<InputDigest>,
    pub tolerances: Tolerances,
    pub truncation_orders: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub verdict: Status,
    pub checks: Vec<Check>,
    pub results: BTreeMap<String, Value>,
    pub provenance: Provenance,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, tolerances: Tolerances) -> Self {
        Report {
            command,
            verdict: Status::Pass,
            checks: Vec::new(),
            results: BTreeMap::new(),
            provenance: Provenance {
                tool: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                inputs: Vec::new(),
                tolerances,
                truncation_orders: BTreeMap::new(),
            },
            warnings: Vec::new(),
        }
    }

    pub fn input(&mut self, digest: InputDigest) {
        self.provenance.inputs.push(digest);
    }

    pub fn order(&mut self, name: impl Into<String>, order: usize) {
        self.provenance.truncation_orders.insert(name.into(), order);
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn result(&mut self, key: impl Into<String>, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report values serialize");
        self.results.insert(key.into(), value);
    }

    pub fn warn(&mut self, warning: impl Into<String>) {
        let w = warning.into();
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
    }

    /// Sets the verdict from the checks and returns it.
    pub fn finish(&mut self) -> Status {
        self.verdict = Status::from_bool(self.checks.iter().all(|c| c.status == Status::Pass));
        self.verdict
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}: {}", self.command, self.verdict.label());
        if !self.checks.is_empty() {
            let _ = writeln!(s, "checks:");
        }
        for c in &self.checks {
            let _ = write!(s, "  {} {}: {:e} (tolerance {:e})", c.status.label(), c.name, c.value, c.tolerance);
            match &c.detail {
                Some(d) => {
                    let _ = writeln!(s, "; {d}");
                }
                None => s.push('\n'),
            }
        }
        if !self.results.is_empty() {
            let _ = writeln!(s, "results:");
        }
        for (k, v) in &self.results {
            let _ = writeln!(s, "  {k}: {v}");
        }
        let _ = writeln!(s, "inputs:");
        for i in &self.provenance.inputs {
            let _ = writeln!(s, "  {} {} sha256:{}", i.label, i.source, i.sha256);
        }
        let t = &self.provenance.tolerances;
        let _ = writeln!(
            s,
            "tolerances: rank {:e}, psd {:e}, residual {:e}, tail {:e}",
            t.rank_tol, t.psd_tol, t.residual_tol, t.tail_tol
        );
        for (k, v) in &self.provenance.truncation_orders {
            let _ = writeln!(s, "truncation {k}: {v}");
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}
