//! Pass/fail reports shared by the verification registries.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::series::{y_name, BracketResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

/// Overall factor shown in front of normalized brackets. Purely a display
/// convention: stored brackets are divided by it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    #[default]
    #[serde(rename = "2h")]
    TwoH,
    #[serde(rename = "qdiff")]
    QDiff,
}

impl Unit {
    pub fn symbol(self) -> &'static str {
        match self {
            Unit::TwoH => "2h",
            Unit::QDiff => "(q - q^-1)",
        }
    }
}

impl FromStr for Unit {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "2h" => Ok(Unit::TwoH),
            "qdiff" | "q-q^-1" => Ok(Unit::QDiff),
            other => Err(Error::IndexError(format!("unknown unit {other:?}"))),
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::TwoH => "2h",
            Unit::QDiff => "qdiff",
        })
    }
}

/// One sub-check of an identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub label: String,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diff: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub identity: String,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diff: Option<String>,
    pub anchors: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<Case>,
}

impl Report {
    pub fn new(identity: &str, anchors: &str) -> Self {
        Report {
            identity: identity.into(),
            status: Status::Pass,
            lhs: String::new(),
            rhs: String::new(),
            diff: None,
            anchors: anchors.into(),
            notes: Vec::new(),
            cases: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Record a sub-check. The headline lhs/rhs follow the first failure, or
    /// the first case while everything passes.
    pub fn push(&mut self, case: Case) {
        let first_fail = case.status == Status::Fail && self.status == Status::Pass;
        if self.cases.is_empty() || first_fail {
            self.lhs = case.lhs.clone();
            self.rhs = case.rhs.clone();
            self.diff = case.diff.clone();
        }
        if case.status == Status::Fail {
            self.status = Status::Fail;
        }
        self.cases.push(case);
    }

    pub fn check(&mut self, label: impl Into<String>, ok: bool, lhs: impl Into<String>, rhs: impl Into<String>) {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let diff = if ok { None } else { Some(format!("{lhs} != {rhs}")) };
        self.push(Case { label: label.into(), status: if ok { Status::Pass } else { Status::Fail }, lhs, rhs, diff });
    }

    pub fn check_brackets(&mut self, label: impl Into<String>, lhs: &BracketResult, rhs: &BracketResult, unit: Unit) {
        self.push(compare_brackets(label, lhs, rhs, unit, &y_name));
    }

    pub fn fail_with(&mut self, label: impl Into<String>, err: impl fmt::Display) {
        self.check(label, false, format!("error: {err}"), "-");
    }

    pub fn summary_line(&self) -> String {
        let failed = self.cases.iter().filter(|c| c.status == Status::Fail).count();
        if self.cases.is_empty() {
            format!("{} {}", self.status, self.identity)
        } else {
            format!("{} {} ({}/{} cases)", self.status, self.identity, self.cases.len() - failed, self.cases.len())
        }
    }
}

pub fn render_bracket(b: &BracketResult, unit: Unit, name: &dyn Fn(usize) -> String) -> String {
    format!("{} * {{ {} }}", unit.symbol(), b.render(name).replace('\n', " + "))
}

pub fn compare_brackets(
    label: impl Into<String>,
    lhs: &BracketResult,
    rhs: &BracketResult,
    unit: Unit,
    name: &dyn Fn(usize) -> String,
) -> Case {
    let ok = lhs == rhs;
    Case {
        label: label.into(),
        status: if ok { Status::Pass } else { Status::Fail },
        lhs: render_bracket(lhs, unit, name),
        rhs: render_bracket(rhs, unit, name),
        diff: if ok { None } else { Some(render_bracket(&lhs.minus(rhs), unit, name)) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headline_follows_first_failure() {
        let mut r = Report::new("X", "");
        r.check("a", true, "1", "1");
        r.check("b", false, "2", "3");
        r.check("c", false, "4", "5");
        assert_eq!(r.status, Status::Fail);
        assert_eq!((r.lhs.as_str(), r.rhs.as_str()), ("2", "3"));
        assert_eq!(r.summary_line(), "FAIL X (1/3 cases)");
    }

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("Y", "anchor");
        r.check("a", true, "x", "x");
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<Report>(&s).unwrap(), r);
        assert_eq!("qdiff".parse::<Unit>().unwrap(), Unit::QDiff);
    }
}
