//! Outcomes of sampled property checks.

use serde::Serialize;

/// Counterexamples kept per check.
pub const MAX_FAILURES: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub inputs: String,
    pub expected: String,
    pub got: String,
}

impl Failure {
    pub fn new(
        inputs: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
    ) -> Self {
        Failure {
            inputs: inputs.into(),
            expected: expected.into(),
            got: got.into(),
        }
    }

    pub fn error(inputs: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Failure::new(inputs, "no error", format!("error: {err}"))
    }
}

/// One property over a batch of samples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub property: String,
    pub pair: Option<String>,
    pub samples: usize,
    pub failed: usize,
    pub failures: Vec<Failure>,
}

impl Check {
    /// Folds per-sample results, keeping the first counterexamples in sample order.
    pub fn from_results(
        property: impl Into<String>,
        pair: Option<String>,
        results: impl IntoIterator<Item = Option<Failure>>,
    ) -> Self {
        let mut samples = 0;
        let mut failed = 0;
        let mut failures = Vec::new();
        for r in results {
            samples += 1;
            if let Some(f) = r {
                failed += 1;
                if failures.len() < MAX_FAILURES {
                    failures.push(f);
                }
            }
        }
        Check {
            property: property.into(),
            pair,
            samples,
            failed,
            failures,
        }
    }

    pub fn single(property: impl Into<String>, result: Option<Failure>) -> Self {
        Check::from_results(property, None, [result])
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    /// Merges checks of the same property over several pairs.
    pub fn merge(property: impl Into<String>, parts: impl IntoIterator<Item = Check>) -> Self {
        let mut out = Check {
            property: property.into(),
            pair: None,
            samples: 0,
            failed: 0,
            failures: Vec::new(),
        };
        for c in parts {
            out.samples += c.samples;
            out.failed += c.failed;
            for f in c.failures {
                if out.failures.len() < MAX_FAILURES {
                    let inputs = match &c.pair {
                        Some(p) => format!("pair {p}: {}", f.inputs),
                        None => f.inputs,
                    };
                    out.failures.push(Failure { inputs, ..f });
                }
            }
        }
        out
    }
}
