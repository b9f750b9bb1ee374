//! Verification reports: named checks against bounds, with text and JSON
//! renderings that agree.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

/// Non-finite floats become the strings `"inf"`, `"-inf"`, `"nan"`.
fn finite_or_tag<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `measured < bound`
    Below,
    /// `measured <= bound`
    AtMost,
    /// `measured > bound`
    Above,
    /// `measured == bound`
    Equals,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(serialize_with = "finite_or_tag")]
    pub measured: f64,
    pub relation: Relation,
    #[serde(serialize_with = "finite_or_tag")]
    pub bound: f64,
    /// Signed slack; positive when the check holds strictly.
    #[serde(serialize_with = "finite_or_tag")]
    pub margin: f64,
    pub pass: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            relation: Relation::Below,
            bound,
            margin: bound - measured,
            pass: measured < bound,
        }
    }

    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            relation: Relation::AtMost,
            pass: measured <= bound,
            ..Self::below(name, measured, bound)
        }
    }

    pub fn above(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            relation: Relation::Above,
            bound,
            margin: measured - bound,
            pass: measured > bound,
        }
    }

    pub fn equals(name: impl Into<String>, measured: f64, expected: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            relation: Relation::Equals,
            bound: expected,
            margin: 0.0 - (measured - expected).abs(),
            pass: measured == expected,
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::equals(name, if ok { 1.0 } else { 0.0 }, 1.0)
    }

    /// A module error turned into a failed check.
    pub fn error(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Self {
            name: format!("{}: {err}", name.into()),
            measured: f64::NAN,
            relation: Relation::Equals,
            bound: 0.0,
            margin: f64::NAN,
            pass: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: String,
    pub kind: String,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    /// Human-readable result lines.
    pub summary: Vec<String>,
    pub provenance: serde_json::Value,
}

impl Report {
    pub fn new(kind: &str, provenance: serde_json::Value) -> Self {
        Self {
            schema: crate::scenario::SCHEMA.to_string(),
            kind: kind.to_string(),
            verdict: Verdict::Pass,
            checks: Vec::new(),
            summary: Vec::new(),
            provenance,
        }
    }

    pub fn push(&mut self, check: Check) {
        if !check.pass {
            self.verdict = Verdict::Fail;
        }
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.summary {
            let _ = writeln!(out, "{line}");
        }
        for c in &self.checks {
            let op = match c.relation {
                Relation::Below => "<",
                Relation::AtMost => "<=",
                Relation::Above => ">",
                Relation::Equals => "==",
            };
            let _ = writeln!(
                out,
                "[{}] {}: {:.16e} {op} {:.16e} (margin {:.16e})",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.measured,
                c.bound,
                c.margin
            );
        }
        let _ = writeln!(out, "verdict: {}", self.verdict.as_str());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_is_conjunction() {
        let mut r = Report::new("planes", serde_json::Value::Null);
        r.push(Check::above("m", 1.0, 0.0));
        assert!(r.passed());
        r.push(Check::below("e", 2.0, 1.0));
        assert!(!r.passed());
        assert!(r.to_text().contains("verdict: fail"));
    }

    #[test]
    fn non_finite_values_serialize_as_tags() {
        let c = Check::above("iso", f64::INFINITY, 0.0);
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["measured"], "inf");
        assert_eq!(v["margin"], "inf");
        assert!(c.pass);
    }

    #[test]
    fn equals_margin() {
        let c = Check::equals("g", 10.0, 10.0);
        assert!(c.pass && c.margin == 0.0);
        assert!(!Check::equals("g", 9.0, 10.0).pass);
    }
}
