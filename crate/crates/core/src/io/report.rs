//! Machine-readable run reports.
//!
//! JSON schema (`gradedcontact-report/1`):
//!
//! ```text
//! {
//!   "format_version": "gradedcontact-report/1",
//!   "tool_version":   "<crate version>",
//!   "command":        "check" | "build-q" | "poissonize" | "verify-diagram" | "selftest",
//!   "seed":           <u64> | null,
//!   "verdicts":       [{"name": <string>, "pass": <bool>, "residual": <canonical polynomial>}],
//!   "results":        {<name>: <canonical text>},
//!   "echo":           <structure file> | <selftest parameters> | null
//! }
//! ```
//!
//! Verdict and result order is deterministic, so equal inputs give
//! byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::check::Check;

pub const REPORT_FORMAT: &str = "gradedcontact-report/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub residual: String,
}

impl From<&Check> for Verdict {
    fn from(c: &Check) -> Self {
        Verdict {
            name: c.name.clone(),
            pass: c.passed(),
            residual: c.residual.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format_version: String,
    pub tool_version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub verdicts: Vec<Verdict>,
    pub results: BTreeMap<String, String>,
    pub echo: Option<serde_json::Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            format_version: REPORT_FORMAT.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            seed: None,
            verdicts: Vec::new(),
            results: BTreeMap::new(),
            echo: None,
        }
    }

    pub fn push(&mut self, name: impl Into<String>, pass: bool, residual: impl Into<String>) {
        self.verdicts.push(Verdict {
            name: name.into(),
            pass,
            residual: residual.into(),
        });
    }

    pub fn push_checks<'a>(&mut self, checks: impl IntoIterator<Item = &'a Check>) {
        self.verdicts.extend(checks.into_iter().map(Verdict::from));
    }

    pub fn result(&mut self, name: impl Into<String>, value: impl Into<String>) {
        self.results.insert(name.into(), value.into());
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} ({})", self.command, self.tool_version, self.format_version);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        for v in &self.verdicts {
            let mark = if v.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{mark}  {}  residual: {}", v.name, v.residual);
        }
        for (k, v) in &self.results {
            let _ = writeln!(out, "{k} = {v}");
        }
        let _ = writeln!(out, "overall: {}", if self.passed() { "pass" } else { "fail" });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_text_agree() {
        let mut r = Report::new("check");
        r.seed = Some(7);
        r.push("[Λ,Λ] − 2RΛ = 0", true, "0");
        r.push("[R,Λ] = 0", false, "p_x*p_y");
        r.result("Q", "0");
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(!r.passed());
        let text = r.to_text();
        assert!(text.contains("PASS  [Λ,Λ] − 2RΛ = 0  residual: 0"));
        assert!(text.contains("FAIL  [R,Λ] = 0  residual: p_x*p_y"));
        assert!(text.ends_with("overall: fail\n"));
    }
}
