use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Absolute slack tolerance: an inequality holds when `rhs − lhs ≥ −SLACK_TOL`.
pub const SLACK_TOL: f64 = 1e-9;

/// Both sides of one inequality on one instance at one index k.
///
/// Every report is oriented so that `slack = rhs − lhs ≥ 0` means the
/// inequality holds. Reports with `hypothesis_ok == false` are informational.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub name: String,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub hypothesis_ok: bool,
    pub constants: BTreeMap<String, f64>,
    tol: f64,
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, k: usize, lhs: f64, rhs: f64, hypothesis_ok: bool) -> Self {
        InequalityReport {
            name: name.into(),
            k,
            lhs,
            rhs,
            slack: rhs - lhs,
            hypothesis_ok,
            constants: BTreeMap::new(),
            tol: SLACK_TOL,
        }
    }

    pub fn with_constant(mut self, key: &str, value: f64) -> Self {
        self.constants.insert(key.to_string(), value);
        self
    }

    /// Replaces the default absolute tolerance.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// Whether the inequality holds numerically, regardless of its hypotheses.
    pub fn holds(&self) -> bool {
        self.slack >= -self.tol
    }

    /// The gated assertion: hypotheses failing means nothing is asserted.
    pub fn passes(&self) -> bool {
        !self.hypothesis_ok || self.holds()
    }
}

/// The checkers selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Check {
    MainBound,
    Yang,
    YangType,
    AbelianQuotient,
    Lambda2,
    YangSecond,
    HileProtter,
    Ppw,
    Ratio,
    Trace,
    Recursion,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::MainBound,
        Check::Yang,
        Check::YangType,
        Check::AbelianQuotient,
        Check::Lambda2,
        Check::YangSecond,
        Check::HileProtter,
        Check::Ppw,
        Check::Ratio,
        Check::Trace,
        Check::Recursion,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Check::MainBound => "main-bound",
            Check::Yang => "yang",
            Check::YangType => "yang-type",
            Check::AbelianQuotient => "abelian-quotient",
            Check::Lambda2 => "lambda2",
            Check::YangSecond => "yang-second",
            Check::HileProtter => "hile-protter",
            Check::Ppw => "ppw",
            Check::Ratio => "ratio",
            Check::Trace => "trace",
            Check::Recursion => "recursion",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Check::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<_> = Check::ALL.iter().map(Check::as_str).collect();
                Error::Parse(format!("unknown inequality '{s}' (known: {})", known.join(", ")))
            })
    }
}

impl TryFrom<String> for Check {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<Check> for String {
    fn from(c: Check) -> String {
        c.as_str().to_string()
    }
}
