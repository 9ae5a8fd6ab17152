use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Witnesses kept per law report.
pub const MAX_WITNESSES: usize = 5;

/// A failing case, with enough data to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub case: usize,
    /// Seed of the case RNG; absent for exhaustively enumerated cases.
    pub case_seed: Option<u64>,
    /// Which equation of the law failed.
    pub check: String,
    pub inputs: Value,
    pub observed: Value,
    pub expected: Value,
}

/// Result of checking one law on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub instance: String,
    pub law: String,
    pub cases: usize,
    pub failures: usize,
    pub witnesses: Vec<Witness>,
    /// Largest finite residual seen over all cases.
    pub max_residual: f64,
    pub seed: u64,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub reports: Vec<LawReport>,
    pub cases: usize,
    pub failures: usize,
}

impl SuiteReport {
    pub fn new(seed: u64, mut reports: Vec<LawReport>) -> Self {
        reports.sort_by(|a, b| (&a.instance, &a.law, a.seed).cmp(&(&b.instance, &b.law, b.seed)));
        SuiteReport {
            seed,
            cases: reports.iter().map(|r| r.cases).sum(),
            failures: reports.iter().map(|r| r.failures).sum(),
            reports,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Failure {
    pub check: String,
    pub inputs: Value,
    pub observed: Value,
    pub expected: Value,
}

/// What one case produced.
#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub residual: f64,
    pub failure: Option<Failure>,
}

impl Outcome {
    pub fn error(e: &Error) -> Self {
        Outcome {
            residual: 0.0,
            failure: Some(Failure {
                check: "case raised an error".into(),
                inputs: Value::Null,
                observed: serde_json::json!({ "error": e.to_string() }),
                expected: Value::Null,
            }),
        }
    }
}

/// A case outcome tagged with its position.
#[derive(Debug, Clone)]
pub(crate) struct Record {
    pub case: usize,
    pub case_seed: Option<u64>,
    pub outcome: Outcome,
}

pub(crate) fn summarize(instance: &str, law: &str, seed: u64, records: Vec<Record>) -> LawReport {
    let cases = records.len();
    let mut failures = 0;
    let mut witnesses = Vec::new();
    let mut max_residual: f64 = 0.0;
    for r in records {
        if r.outcome.residual.is_finite() {
            max_residual = max_residual.max(r.outcome.residual);
        }
        if let Some(f) = r.outcome.failure {
            failures += 1;
            if witnesses.len() < MAX_WITNESSES {
                witnesses.push(Witness {
                    case: r.case,
                    case_seed: r.case_seed,
                    check: f.check,
                    inputs: f.inputs,
                    observed: f.observed,
                    expected: f.expected,
                });
            }
        }
    }
    LawReport {
        instance: instance.into(),
        law: law.into(),
        cases,
        failures,
        witnesses,
        max_residual,
        seed,
    }
}

fn to_value<T: Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Accumulates the checks of a single case. Only the first failing check is kept.
#[derive(Debug, Default)]
pub(crate) struct Probe {
    residual: f64,
    failure: Option<(String, Value, Value)>,
}

impl Probe {
    /// Records a residual, failing when it exceeds `tol` (or is not a number).
    pub fn close<A: Serialize + ?Sized, B: Serialize + ?Sized>(
        &mut self,
        check: &str,
        residual: f64,
        tol: f64,
        observed: &A,
        expected: &B,
    ) {
        if residual.is_finite() {
            self.residual = self.residual.max(residual);
        }
        // NaN residuals fail.
        if residual.is_nan() || residual > tol {
            self.fail(check, observed, expected);
        }
    }

    /// A check with no numeric residual.
    pub fn holds<A: Serialize + ?Sized, B: Serialize + ?Sized>(&mut self, check: &str, ok: bool, observed: &A, expected: &B) {
        if !ok {
            self.fail(check, observed, expected);
        }
    }

    fn fail<A: Serialize + ?Sized, B: Serialize + ?Sized>(&mut self, check: &str, observed: &A, expected: &B) {
        if self.failure.is_none() {
            self.failure = Some((check.into(), to_value(observed), to_value(expected)));
        }
    }

    /// Closes the case. `inputs` is only evaluated when something failed.
    pub fn finish(self, body: Result<()>, inputs: impl FnOnce() -> Value) -> Outcome {
        let failure = match (body, self.failure) {
            (Err(e), _) => Some(("case raised an error".to_string(), serde_json::json!({ "error": e.to_string() }), Value::Null)),
            (Ok(()), f) => f,
        };
        Outcome {
            residual: self.residual,
            failure: failure.map(|(check, observed, expected)| Failure {
                check,
                inputs: inputs(),
                observed,
                expected,
            }),
        }
    }
}

/// Builds a JSON object from `name => value` pairs of serializable values.
macro_rules! inputs {
    ($($k:literal => $v:expr),* $(,)?) => {{
        let mut m = serde_json::Map::new();
        $( m.insert($k.to_string(), serde_json::to_value(&$v).unwrap_or(serde_json::Value::Null)); )*
        serde_json::Value::Object(m)
    }};
}
pub(crate) use inputs;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probe_keeps_first_failure_and_max_residual() {
        let mut p = Probe::default();
        p.close("a", 0.5, 1.0, &1, &1);
        p.close("b", 2.0, 1.0, &2, &3);
        p.holds("c", false, &4, &5);
        let o = p.finish(Ok(()), || inputs!("x" => 7));
        assert_eq!(o.residual, 2.0);
        let f = o.failure.unwrap();
        assert_eq!(f.check, "b");
        assert_eq!(f.inputs, serde_json::json!({ "x": 7 }));
        assert_eq!(f.expected, serde_json::json!(3));
    }

    #[test]
    fn nan_residual_fails() {
        let mut p = Probe::default();
        p.close("nan", f64::NAN, 1.0, &0, &0);
        let o = p.finish(Ok(()), || Value::Null);
        assert_eq!(o.residual, 0.0);
        assert!(o.failure.is_some());
    }

    #[test]
    fn summary_caps_witnesses() {
        let records = (0..10)
            .map(|i| Record {
                case: i,
                case_seed: Some(i as u64),
                outcome: Outcome::error(&Error::Generation("boom".into())),
            })
            .collect();
        let r = summarize("sets", "composition", 1, records);
        assert_eq!(r.failures, 10);
        assert_eq!(r.witnesses.len(), MAX_WITNESSES);
        assert!(!r.passed());
    }
}
