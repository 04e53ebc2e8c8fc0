//! Experiment configuration, the property suites, the variance-explained
//! table reproduction, and report rendering.

mod report;
mod suites;
mod table3;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::data::{enumeration_cap, Partition};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::transforms::TransformRecord;

pub use report::{Format, Report};
pub use table3::{reproduce_table3, Table3Cell, Table3Column, Table3Report, TABLE3_REFERENCE};

/// Shared knobs for every experiment. The master seed is copied into every
/// report.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Replaces each check's default trial count when set.
    pub trials: Option<usize>,
    /// Lloyd restarts where a check needs a heuristic solution.
    pub restarts: usize,
    /// Relative slack when comparing objective values.
    pub rel_tol: f64,
    /// Adds wall-clock runtimes to reports, which makes them
    /// non-reproducible byte for byte.
    pub timing: bool,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: None,
            restarts: 10,
            rel_tol: 1e-9,
            timing: false,
            execution: Execution::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub(crate) fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ScaleInvariance,
    KRichness,
    CentricConsistencyLocal,
    CentricConsistencyGlobal,
    MotionConsistency,
    Separation4Rho,
    CorePreservation,
    AbsoluteGlobal,
    Interference,
    /// The threshold rule offered as a clustering function satisfying the
    /// repaired axioms.
    ThresholdFunction,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::ScaleInvariance,
        Suite::KRichness,
        Suite::CentricConsistencyLocal,
        Suite::CentricConsistencyGlobal,
        Suite::MotionConsistency,
        Suite::Separation4Rho,
        Suite::CorePreservation,
        Suite::AbsoluteGlobal,
        Suite::Interference,
        Suite::ThresholdFunction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ScaleInvariance => "scale-invariance",
            Suite::KRichness => "k-richness",
            Suite::CentricConsistencyLocal => "centric-consistency-local",
            Suite::CentricConsistencyGlobal => "centric-consistency-global",
            Suite::MotionConsistency => "motion-consistency",
            Suite::Separation4Rho => "separation-4rho",
            Suite::CorePreservation => "core-preservation",
            Suite::AbsoluteGlobal => "absolute-global",
            Suite::Interference => "interference",
            Suite::ThresholdFunction => "threshold-function",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Enough to replay one failing trial on its own.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub trial: usize,
    pub dataset: Vec<Vec<f64>>,
    pub partition: Partition,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformRecord>,
    pub detail: String,
}

/// One property checked over many trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub trials: usize,
    pub violations: usize,
    /// One line explaining the verdict.
    pub summary: String,
    /// Named numbers behind the verdict.
    pub metrics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    pub(crate) fn from_trials(name: &str, trials: usize, failures: Vec<Witness>, summary: String) -> Self {
        Check {
            name: name.to_string(),
            passed: failures.is_empty(),
            trials,
            violations: failures.len(),
            summary,
            metrics: BTreeMap::new(),
            witness: failures.into_iter().next(),
        }
    }

    pub(crate) fn metric(mut self, name: &str, value: f64) -> Self {
        self.metrics.insert(name.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    pub crate_version: &'static str,
    pub os: &'static str,
    pub arch: &'static str,
    pub parallel_feature: bool,
    pub enumeration_cap: usize,
}

impl Environment {
    pub fn current() -> Self {
        Self {
            crate_version: env!("CARGO_PKG_VERSION"),
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
            parallel_feature: cfg!(feature = "parallel"),
            enumeration_cap: enumeration_cap(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u128>,
    pub environment: Environment,
}

pub fn run_suite(suite: Suite, config: &ExperimentConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = suites::run(suite, config)?;
    Ok(SuiteReport {
        suite,
        seed: config.seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
        runtime_ms: config.timing.then(|| start.elapsed().as_millis()),
        environment: Environment::current(),
    })
}

/// Runs a suite given by name.
pub fn run_suite_named(name: &str, config: &ExperimentConfig) -> Result<SuiteReport> {
    run_suite(name.parse()?, config)
}
