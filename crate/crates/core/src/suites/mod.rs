//! Seeded law suites. Each suite draws its cases from a ChaCha stream fixed
//! by the seed, so a report depends only on `(suite, seed, cases)`.

pub mod cells;
pub mod dim_laws;
pub mod dimrank;
pub mod monotone;
pub mod pregeometry;
pub mod qe;
pub mod rank;
pub mod shadow;

use std::time::{Duration, Instant};

use serde::Serialize;

/// One violated law.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Failure {
    pub inputs: String,
    pub law: String,
    pub observed: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<Failure>,
    /// Inputs abandoned because an operation hit its resource limit. These
    /// are not counted in `cases` and are not failures: the budget signals
    /// size, not wrongness.
    pub skipped: Vec<String>,
    /// Not serialized: reports are byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Collects failures while a suite runs.
pub(crate) struct Recorder {
    report: SuiteReport,
    start: Instant,
}

impl Recorder {
    pub(crate) fn new(suite: &str, seed: u64) -> Self {
        Recorder {
            report: SuiteReport {
                suite: suite.to_string(),
                seed,
                cases: 0,
                failures: Vec::new(),
                skipped: Vec::new(),
                wall_time: Duration::ZERO,
            },
            start: Instant::now(),
        }
    }

    pub(crate) fn case(&mut self) {
        self.report.cases += 1;
    }

    pub(crate) fn fail(&mut self, inputs: impl Into<String>, law: &str, observed: impl Into<String>) {
        self.report.failures.push(Failure { inputs: inputs.into(), law: law.to_string(), observed: observed.into() });
    }

    pub(crate) fn uncount(&mut self) {
        self.report.cases -= 1;
    }

    pub(crate) fn skipped(&self) -> usize {
        self.report.skipped.len()
    }

    /// Records `Err` results as failures, or as skips when the error is a
    /// resource limit, and passes `Ok` values through.
    pub(crate) fn check<T>(&mut self, inputs: &dyn Fn() -> String, law: &str, r: crate::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(crate::Error::ResourceLimit(_)) => {
                self.report.skipped.push(inputs());
                None
            }
            Err(e) => {
                self.fail(inputs(), law, format!("error: {e}"));
                None
            }
        }
    }

    pub(crate) fn finish(mut self) -> SuiteReport {
        self.report.wall_time = self.start.elapsed();
        self.report
    }
}

pub const SUITES: [&str; 8] = ["qe", "dim-laws", "pregeometry", "dimrank", "rank", "shadow", "monotone", "cells"];

/// Runs a suite by name. `cases` defaults per suite; `corpus` replaces the
/// built-in corpus of the corpus-driven suites; `oracle` selects the
/// pregeometry oracle (`matroid` by default).
pub fn run_named(
    name: &str,
    seed: u64,
    cases: Option<usize>,
    oracle: Option<&str>,
    corpus: Option<Vec<crate::syntax::DefinableSet>>,
) -> crate::Result<SuiteReport> {
    use crate::corpus::{parse_corpus, FUNCTIONS, PARAMETRIC, SHAPES};
    let builtin = |text: &str| corpus.clone().map_or_else(|| parse_corpus(text), Ok);
    if oracle.is_some() && name != "pregeometry" {
        return Err(crate::Error::Usage(format!("--oracle only applies to the pregeometry suite, not `{name}`")));
    }
    Ok(match name {
        "qe" => qe::run(seed, cases.unwrap_or(300)),
        "dim-laws" => dim_laws::run(seed, cases.unwrap_or(300)),
        "pregeometry" => {
            let kind: pregeometry::OracleKind = oracle.unwrap_or("matroid").parse()?;
            let default = if kind == pregeometry::OracleKind::Matroid { 200 } else { 500 };
            pregeometry::run(seed, cases.unwrap_or(default), kind)
        }
        "dimrank" => dimrank::run(seed, &builtin(SHAPES)?, cases.unwrap_or(200)),
        "rank" => rank::run(seed, &builtin(PARAMETRIC)?),
        "shadow" => shadow::run(seed, cases.unwrap_or(200)),
        "monotone" => monotone::run(seed, &builtin(FUNCTIONS)?),
        "cells" => cells::run(seed, &builtin(SHAPES)?),
        _ => return Err(crate::Error::Usage(format!("unknown suite `{name}` (one of {})", SUITES.join(", ")))),
    })
}
