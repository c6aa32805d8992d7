//! The property suites, the runner binding them to a [`RunConfig`], and the JSON report.
//!
//! Every suite draws its samples from `stream(seed, label, i)`, so reports are
//! identical across runs, thread counts and suite subsets. Property sample
//! counts scale with `samples`: a property with base count `n` runs
//! `max(1, n * samples / 100)` samples, and the valuation axioms run `samples`
//! samples per root pair.

pub mod config;

mod appendix;
mod axioms;
mod embedding;
mod field;
mod folding;
mod groups;
mod moufang;
mod roots;
mod scalars;

use std::time::{Duration, Instant};

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use config::{ConfigError, RunConfig, Settings, SuiteName};

use crate::datum::Case;
use crate::field::{AnyField, FiniteField, HahnField, TitsField};
use crate::moufang::PermGroupStats;
use crate::report::{Check, Failure};
use crate::rng::par_samples;
use crate::Quad;

/// Field-specific hooks the suites need beyond [`TitsField`].
pub trait SuiteField: TitsField + Clone {
    fn describe(&self) -> String;
    /// A random element with leading term at exponent `e`, or `None` if the
    /// field's valuation is trivial.
    fn with_leading(&self, rng: &mut ChaCha8Rng, e: &Quad) -> Option<Self::Elem>;
    fn as_hahn(&self) -> Option<&HahnField>;
}

impl SuiteField for FiniteField {
    fn describe(&self) -> String {
        format!("GF({}^{})", self.characteristic(), self.degree())
    }
    fn with_leading(&self, _rng: &mut ChaCha8Rng, _e: &Quad) -> Option<Self::Elem> {
        None
    }
    fn as_hahn(&self) -> Option<&HahnField> {
        None
    }
}

impl SuiteField for HahnField {
    fn describe(&self) -> String {
        let prec = self.max_precision().to_quad(self.denom());
        format!(
            "Hahn series over GF({}^{}), exponents in (Z + Z sqrt{})/{}, precision {}",
            self.p(),
            self.coefficients().degree(),
            self.p(),
            self.denom(),
            prec
        )
    }

    /// Leading term at `e` plus up to two higher random terms.
    fn with_leading(&self, rng: &mut ChaCha8Rng, e: &Quad) -> Option<Self::Elem> {
        use crate::field::{Exponent, Gf};
        use rand::Rng;
        let lead = Exponent::from_quad(e, self.denom())?;
        let order = self.coefficients().order();
        let mut terms = vec![(lead, Gf(rng.gen_range(1..order) as u16))];
        let extra = rng.gen_range(0..=2);
        for _ in 0..extra {
            let step = rng.gen_range(1..=2 * self.denom() as i64);
            let e = Exponent::new(lead.a + step, lead.b, self.p());
            terms.push((e, Gf(rng.gen_range(1..order) as u16)));
        }
        Some(self.truncated(terms))
    }

    fn as_hahn(&self) -> Option<&HahnField> {
        Some(self)
    }
}

/// What a suite sees of the run.
pub struct Ctx<'a, F> {
    pub case: Case,
    pub field: &'a F,
    pub samples: usize,
    pub seed: u64,
    pub corrupt_signs: bool,
}

impl<F> Ctx<'_, F> {
    /// Scaled sample count for a property whose base count is `base`.
    pub fn n(&self, base: usize) -> usize {
        (base * self.samples / 100).max(1)
    }
}

impl<F: Sync> Ctx<'_, F> {
    /// Runs `f` on `n(base)` samples drawn from streams labelled `property`.
    pub fn sampled<G>(&self, property: &str, base: usize, f: G) -> Check
    where
        G: Fn(&mut ChaCha8Rng) -> Option<Failure> + Sync,
    {
        let results = par_samples(self.n(base), self.seed, property, |rng, _| f(rng));
        Check::from_results(property, None, results)
    }
}

/// Runs `f` on every item, in parallel, keeping item order.
pub fn exhaustive<T: Sync, G>(property: &str, items: &[T], f: G) -> Check
where
    G: Fn(&T) -> Option<Failure> + Sync,
{
    use rayon::prelude::*;
    let results: Vec<Option<Failure>> = items.par_iter().map(&f).collect();
    Check::from_results(property, None, results)
}

/// `None` when `ok`, else a failure with the given strings.
pub fn expect(
    ok: bool,
    inputs: impl FnOnce() -> String,
    expected: impl ToString,
    got: impl ToString,
) -> Option<Failure> {
    (!ok).then(|| Failure::new(inputs(), expected.to_string(), got.to_string()))
}

/// One candidate `Phi_0`/`Phi_1` assignment and how it fared on V2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub assignment: String,
    pub v2_passed: bool,
    pub failing_pairs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiInfo {
    pub chosen: Option<String>,
    pub assignments_passing: usize,
    pub candidates: Vec<Candidate>,
}

/// Table entries that are sign placeholders rather than consequences of the relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnforcedSigns {
    pub epsilon: Vec<String>,
    pub m_conj: Vec<String>,
}

/// Everything a suite produces.
#[derive(Debug, Clone, Default)]
pub struct SuiteOutput {
    pub checks: Vec<Check>,
    pub phi: Option<PhiInfo>,
    pub unforced_signs: Option<UnforcedSigns>,
    pub group_stats: Option<PermGroupStats>,
    pub suzuki_coefficients: Option<String>,
}

impl SuiteOutput {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Records a property that either holds or has one counterexample.
    pub fn single(&mut self, property: &str, failure: Option<Failure>) {
        self.checks.push(Check::single(property, failure));
    }
}

/// One flattened check in the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub suite: String,
    pub property: String,
    pub case: String,
    pub pair: Option<String>,
    pub samples: usize,
    pub failed: usize,
    pub passed: bool,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub checks: usize,
    pub samples: usize,
    pub failed: usize,
    pub passed: bool,
}

/// The run report; field order is the JSON key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub case: String,
    pub field: String,
    pub seed: u64,
    pub samples: usize,
    pub corrupt_signs: bool,
    pub passed: bool,
    pub suites: Vec<SuiteSummary>,
    pub phi: Option<PhiInfo>,
    pub unforced_signs: Option<UnforcedSigns>,
    pub group_stats: Option<PermGroupStats>,
    pub suzuki_coefficients: Option<String>,
    pub records: Vec<Record>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn suite(&self, name: SuiteName) -> Option<&SuiteSummary> {
        self.suites.iter().find(|s| s.suite == name.as_str())
    }

    pub fn records_of<'a>(
        &'a self,
        suite: SuiteName,
        property: &'a str,
    ) -> impl Iterator<Item = &'a Record> {
        self.records
            .iter()
            .filter(move |r| r.suite == suite.as_str() && r.property == property)
    }
}

/// A report plus wall-clock time per suite, which is kept out of the report.
pub struct RunOutcome {
    pub report: Report,
    pub timings: Vec<(SuiteName, Duration)>,
}

impl RunOutcome {
    /// 0 if every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.passed {
            0
        } else {
            1
        }
    }
}

/// Runs the configured suites, in a pool of `jobs` threads if set.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, ConfigError> {
    if cfg.samples == 0 {
        return Err(ConfigError::Invalid("samples must be at least 1".into()));
    }
    if cfg.field.char != cfg.case.characteristic() {
        return Err(ConfigError::Invalid(format!(
            "case {} needs characteristic {}, not {}",
            cfg.case,
            cfg.case.characteristic(),
            cfg.field.char
        )));
    }
    let field = cfg
        .field
        .build()
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let go = || match &field {
        AnyField::Finite(f) => run_with(cfg, f),
        AnyField::Hahn(h) => run_with(cfg, h),
    };
    match cfg.jobs {
        None => Ok(go()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| ConfigError::Invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(go))
        }
    }
}

fn run_suite<F: SuiteField>(name: SuiteName, ctx: &Ctx<'_, F>) -> SuiteOutput {
    match name {
        SuiteName::Scalars => scalars::run(ctx),
        SuiteName::Roots => roots::run(ctx),
        SuiteName::Folding => folding::run(ctx),
        SuiteName::Field => field::run(ctx),
        SuiteName::Groups => groups::run(ctx),
        SuiteName::Appendix => appendix::run(ctx),
        SuiteName::ValuationAxioms => axioms::run(ctx),
        SuiteName::Embedding => embedding::run(ctx),
        SuiteName::Moufang => moufang::run(ctx),
    }
}

fn run_with<F: SuiteField>(cfg: &RunConfig, field: &F) -> RunOutcome {
    use rayon::prelude::*;
    let ctx = Ctx {
        case: cfg.case,
        field,
        samples: cfg.samples,
        seed: cfg.seed,
        corrupt_signs: cfg.corrupt_signs,
    };
    let outputs: Vec<(SuiteName, SuiteOutput, Duration)> = cfg
        .suites
        .par_iter()
        .map(|&name| {
            let start = Instant::now();
            let out = run_suite(name, &ctx);
            (name, out, start.elapsed())
        })
        .collect();
    let case = cfg.case.to_string();
    let mut report = Report {
        case: case.clone(),
        field: field.describe(),
        seed: cfg.seed,
        samples: cfg.samples,
        corrupt_signs: cfg.corrupt_signs,
        passed: true,
        suites: Vec::new(),
        phi: None,
        unforced_signs: None,
        group_stats: None,
        suzuki_coefficients: None,
        records: Vec::new(),
    };
    let mut timings = Vec::new();
    for (name, out, elapsed) in outputs {
        timings.push((name, elapsed));
        let summary = SuiteSummary {
            suite: name.to_string(),
            checks: out.checks.len(),
            samples: out.checks.iter().map(|c| c.samples).sum(),
            failed: out.checks.iter().map(|c| c.failed).sum(),
            passed: out.checks.iter().all(Check::passed),
        };
        report.passed &= summary.passed;
        report.suites.push(summary);
        for c in out.checks {
            report.records.push(Record {
                suite: name.to_string(),
                passed: c.passed(),
                property: c.property,
                case: case.clone(),
                pair: c.pair,
                samples: c.samples,
                failed: c.failed,
                failures: c.failures,
            });
        }
        report.phi = report.phi.or(out.phi);
        report.unforced_signs = report.unforced_signs.or(out.unforced_signs);
        report.group_stats = report.group_stats.or(out.group_stats);
        report.suzuki_coefficients = report.suzuki_coefficients.or(out.suzuki_coefficients);
    }
    RunOutcome { report, timings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCfg;

    #[test]
    fn small_run_is_deterministic_and_counts_scale() {
        let mut cfg = RunConfig::new(Case::G, FieldCfg::finite(3, 3));
        cfg.samples = 2;
        cfg.suites = vec![SuiteName::Scalars, SuiteName::Roots];
        let a = run(&cfg).unwrap();
        cfg.jobs = Some(1);
        let b = run(&cfg).unwrap();
        assert_eq!(a.report.to_json(), b.report.to_json());
        assert_eq!(a.report.suites.len(), 2);
        let ctx = Ctx {
            case: Case::G,
            field: &(),
            samples: 10,
            seed: 0,
            corrupt_signs: false,
        };
        assert_eq!((ctx.n(1000), ctx.n(5)), (100, 1));
    }

    #[test]
    fn mismatched_characteristic_is_a_config_error() {
        let cfg = RunConfig::new(Case::B, FieldCfg::finite(3, 1));
        assert!(matches!(run(&cfg), Err(ConfigError::Invalid(_))));
    }
}
