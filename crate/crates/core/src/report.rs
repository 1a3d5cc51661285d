//! Structured verification results.
//!
//! Every check in the crate produces a [`VerificationReport`]. Big integers
//! are carried as decimal strings so the JSON form never overflows a reader's
//! 64-bit numbers.

use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

/// Concrete evidence attached to a failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    /// `value` (the counting function at `index`) is not divisible by `divisor`.
    /// When only a residue was computed, `value` is that residue.
    Divisibility { n: u64, index: String, value: String, divisor: String },
    /// Two series disagree at `exponent`.
    Coefficient { exponent: i64, left: String, right: String },
    /// A 5-adic valuation fell below its bound.
    Valuation { lemma: String, indices: String, computed: String, bound: String },
    /// Anything else: an expected and an actual value.
    Mismatch { what: String, expected: String, actual: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ell: Option<u64>,
}

impl Params {
    pub fn kb(k: u32, beta: u32) -> Self {
        Self { k: Some(k), beta: Some(beta), ..Self::default() }
    }

    pub fn with_r(mut self, r: u32) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_ell(mut self, ell: u64) -> Self {
        self.ell = Some(ell);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeKind {
    /// Values of `n` in a divisibility sweep.
    N,
    /// Exponent window of a series comparison.
    Window,
    /// Matrix or vector indices.
    Indices,
}

/// Inclusive-exclusive range `[lo, hi)` that was actually checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckedRange {
    pub kind: RangeKind,
    pub lo: i64,
    pub hi: i64,
}

/// One line of a valuation-lemma report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationRecord {
    pub indices: String,
    pub computed: String,
    pub bound: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub source: String,
    #[serde(default)]
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub range: Option<CheckedRange>,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    /// Informational entries are reported but never affect the exit status.
    pub asserted: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub millis: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub valuations: Vec<ValuationRecord>,
}

impl VerificationReport {
    pub fn new(id: impl Into<String>, source: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            source: source.into(),
            params: Params::default(),
            range: None,
            outcome: Outcome::Pass,
            witness: None,
            reason: None,
            note: None,
            asserted: true,
            millis: None,
            valuations: Vec::new(),
        }
    }

    pub fn params(mut self, params: Params) -> Self {
        self.params = params;
        self
    }

    pub fn range(mut self, kind: RangeKind, lo: i64, hi: i64) -> Self {
        self.range = Some(CheckedRange { kind, lo, hi });
        self
    }

    pub fn pass(mut self) -> Self {
        self.outcome = Outcome::Pass;
        self.witness = None;
        self
    }

    pub fn fail(mut self, witness: Witness) -> Self {
        self.outcome = Outcome::Fail;
        self.witness = Some(witness);
        self
    }

    pub fn skipped(mut self, reason: impl Into<String>) -> Self {
        self.outcome = Outcome::Skipped;
        self.reason = Some(reason.into());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn informational(mut self) -> Self {
        self.asserted = false;
        self
    }

    pub fn is_pass(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.outcome == Outcome::Fail
    }

    /// A failure that counts against the run.
    pub fn is_blocking(&self) -> bool {
        self.asserted && self.outcome == Outcome::Fail
    }

    pub fn timed(mut self, started: Instant) -> Self {
        self.millis = Some(started.elapsed().as_millis() as u64);
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// Failures among informational entries; these do not fail the run.
    pub informational_failed: usize,
}

impl Summary {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut s = Summary { total: reports.len(), ..Summary::default() };
        for r in reports {
            match r.outcome {
                Outcome::Pass => s.passed += 1,
                Outcome::Skipped => s.skipped += 1,
                Outcome::Fail if r.asserted => s.failed += 1,
                Outcome::Fail => s.informational_failed += 1,
            }
        }
        s
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = VerificationReport::new("c1/k1/b0", "theorem1")
            .params(Params::kb(1, 0).with_ell(5))
            .range(RangeKind::N, 0, 301)
            .fail(Witness::Divisibility {
                n: 3,
                index: "19".into(),
                value: "7".into(),
                divisor: "5".into(),
            });
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["params"]["ell"], 5);
        assert_eq!(v["params"]["beta"], 0);
        assert!(v["params"].get("r").is_none());
        assert_eq!(v["outcome"], "fail");
        assert_eq!(v["witness"]["kind"], "divisibility");
        assert_eq!(v["range"]["kind"], "n");
        assert!(v.get("millis").is_none());
        let back: VerificationReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn summary_ignores_informational_failures() {
        let fail = VerificationReport::new("a", "x").fail(Witness::Mismatch {
            what: "m".into(),
            expected: "1".into(),
            actual: "2".into(),
        });
        let reports = vec![
            VerificationReport::new("p", "x"),
            fail.clone().informational(),
            VerificationReport::new("s", "x").skipped("budget"),
        ];
        let s = Summary::of(&reports);
        assert!(s.ok());
        assert_eq!((s.passed, s.skipped, s.informational_failed), (1, 1, 1));
        assert!(!Summary::of(&[fail]).ok());
    }
}
