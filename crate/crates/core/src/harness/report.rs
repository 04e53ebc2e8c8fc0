use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use super::{Environment, ExperimentConfig, SuiteReport, Table3Column, Table3Report};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(Error::param("format", format!("unknown format `{other}` (json, csv, markdown)"))),
        }
    }
}

/// Everything one invocation produced, with the configuration that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub seed: u64,
    pub config: ExperimentConfig,
    pub environment: Environment,
    pub suites: Vec<SuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table3: Option<Table3Report>,
}

impl Report {
    pub fn new(config: &ExperimentConfig) -> Self {
        Self {
            seed: config.seed,
            config: config.clone(),
            environment: Environment::current(),
            suites: Vec::new(),
            table3: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed) && self.table3.as_ref().is_none_or(|t| t.all_within)
    }

    /// CSV holds a single table: the suite checks, or the table grid when no
    /// suites were run.
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Csv => self.csv(),
            Format::Markdown => Ok(self.markdown()),
        }
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        std::fs::write(path, self.render(format)?)?;
        Ok(())
    }

    fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match (&self.table3, self.suites.is_empty()) {
            (Some(t), true) => {
                w.write_record(["k", "original", "kleinberg", "centric"])?;
                for k in 2..=6 {
                    let mut row = vec![k.to_string()];
                    for col in Table3Column::ALL {
                        row.push(t.cell(k, col).map_or(String::new(), |c| format!("{:.2}", c.measured)));
                    }
                    w.write_record(&row)?;
                }
            }
            (None, _) => {
                w.write_record(["seed", "suite", "check", "passed", "trials", "violations", "summary"])?;
                for s in &self.suites {
                    for c in &s.checks {
                        w.write_record([
                            &self.seed.to_string(),
                            s.suite.name(),
                            &c.name,
                            &c.passed.to_string(),
                            &c.trials.to_string(),
                            &c.violations.to_string(),
                            &c.summary,
                        ])?;
                    }
                }
            }
            (Some(_), false) => {
                return Err(Error::param(
                    "format",
                    "csv holds one table; render suites and the variance table separately",
                ))
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    fn markdown(&self) -> String {
        let mut s = String::new();
        let e = &self.environment;
        let _ = writeln!(s, "# axiomlab report\n");
        let _ = writeln!(
            s,
            "seed {} · axiomlab {} · {}/{} · parallel {} · enumeration cap {}\n",
            self.seed, e.crate_version, e.os, e.arch, e.parallel_feature, e.enumeration_cap
        );
        if !self.suites.is_empty() {
            let _ = writeln!(s, "| suite | check | result | trials | violations | summary |");
            let _ = writeln!(s, "|---|---|---|---|---|---|");
            for suite in &self.suites {
                for c in &suite.checks {
                    let _ = writeln!(
                        s,
                        "| {} | {} | {} | {} | {} | {} |",
                        suite.suite,
                        c.name,
                        if c.passed { "pass" } else { "FAIL" },
                        c.trials,
                        c.violations,
                        c.summary.replace('|', "\\|")
                    );
                }
            }
            s.push('\n');
        }
        if let Some(t) = &self.table3 {
            let _ = writeln!(s, "Variance explained (%), measured (published, deviation), {} restarts:\n", t.restarts);
            let _ = writeln!(s, "| k | original | kleinberg | centric |");
            let _ = writeln!(s, "|---|---|---|---|");
            for k in 2..=6 {
                let _ = write!(s, "| {k} |");
                for col in Table3Column::ALL {
                    if let Some(c) = t.cell(k, col) {
                        let mark = if c.within { "" } else { " **out**" };
                        let _ = write!(s, " {:.2} ({}, {:+.2}){mark} |", c.measured, c.reference, c.deviation);
                    }
                }
                s.push('\n');
            }
        }
        s
    }
}
