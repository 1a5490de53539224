//! Versioned JSON reports of verification runs.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use crate::quotient::Verdict;

pub const SCHEMA: u32 = 1;

/// One check on one instance. Failing records carry a witness that
/// reproduces the failure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check: String,
    /// The property being checked, in words.
    pub anchor: String,
    pub instance: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<i64>,
    /// Cases examined for bulk checks.
    pub cases: u64,
    pub elapsed_ms: u64,
}

impl Record {
    pub fn new(check: &str, anchor: &str, instance: impl Into<String>) -> Self {
        Record {
            check: check.into(),
            anchor: anchor.into(),
            instance: instance.into(),
            verdict: Verdict::Pass,
            witness: None,
            slack: None,
            cases: 0,
            elapsed_ms: 0,
        }
    }

    pub fn verdict(mut self, v: Verdict) -> Self {
        self.verdict = v;
        self
    }

    pub fn witness(mut self, w: impl Serialize) -> Self {
        self.witness = Some(serde_json::to_value(w).expect("witness serializes"));
        self
    }

    pub fn slack(mut self, s: Option<i64>) -> Self {
        self.slack = s;
        self
    }

    pub fn cases(mut self, n: u64) -> Self {
        self.cases = n;
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = start.elapsed().as_millis() as u64;
        self
    }

    /// `Pass` when `failure` is `None`, otherwise `Fail` with the witness.
    pub fn outcome<W: Serialize>(self, failure: Option<W>) -> Self {
        match failure {
            None => self.verdict(Verdict::Pass),
            Some(w) => self.verdict(Verdict::Fail).witness(w),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub unknown: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub config: Value,
    pub summary: Summary,
    pub records: Vec<Record>,
}

impl Report {
    /// Sorts records by `(check, instance)` and recomputes the summary.
    pub fn new(config: Value, mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| (&a.check, &a.instance).cmp(&(&b.check, &b.instance)));
        let mut summary = Summary::default();
        for r in &records {
            match r.verdict {
                Verdict::Pass => summary.pass += 1,
                Verdict::Fail => summary.fail += 1,
                Verdict::Inconclusive => summary.inconclusive += 1,
                Verdict::Unknown => summary.unknown += 1,
            }
        }
        Report { schema: SCHEMA, config, summary, records }
    }

    pub fn has_fail(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report with timings zeroed; equal across runs with one seed.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        for r in &mut c.records {
            r.elapsed_ms = 0;
        }
        c.to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_sort_and_summarize() {
        let recs = vec![
            Record::new("b", "x", "2").outcome(Some("w")),
            Record::new("a", "x", "9"),
            Record::new("b", "x", "1").verdict(Verdict::Inconclusive),
        ];
        let r = Report::new(Value::Null, recs);
        let order: Vec<(&str, &str)> = r.records.iter().map(|r| (r.check.as_str(), r.instance.as_str())).collect();
        assert_eq!(order, vec![("a", "9"), ("b", "1"), ("b", "2")]);
        assert_eq!(r.summary, Summary { pass: 1, fail: 1, inconclusive: 1, unknown: 0 });
        assert!(r.has_fail());
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["records"][2]["verdict"], "FAIL");
        assert_eq!(v["records"][2]["witness"], "w");
    }

    #[test]
    fn canonical_form_ignores_timing() {
        let mut a = Record::new("a", "x", "1");
        a.elapsed_ms = 5;
        let mut b = a.clone();
        b.elapsed_ms = 9;
        assert_eq!(
            Report::new(Value::Null, vec![a]).canonical_json(),
            Report::new(Value::Null, vec![b]).canonical_json()
        );
    }
}
