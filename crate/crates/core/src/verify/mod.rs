//! Check registry, suite runner and reports.

mod numeric;
mod replay;
pub mod report;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::error::{EngineError, Result};
use crate::jet::checks::{JET_CHECKS, STATIC_CHECKS};
use crate::kernel::poly::DEFAULT_TERM_BUDGET;
use crate::numeric::{GridPoint, NumConfig};

pub use report::{Report, Summary};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Static,
    Jet,
    Numeric,
    All,
}

impl FromStr for Suite {
    type Err = EngineError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(Suite::Static),
            "jet" => Ok(Suite::Jet),
            "numeric" => Ok(Suite::Numeric),
            "all" => Ok(Suite::All),
            o => Err(EngineError::Config(format!("unknown suite `{o}`"))),
        }
    }
}

/// How exact checks are decided.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Sampled,
}

impl FromStr for Mode {
    type Err = EngineError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symbolic" => Ok(Mode::Symbolic),
            "sampled" => Ok(Mode::Sampled),
            o => Err(EngineError::Config(format!("unknown mode `{o}`"))),
        }
    }
}

/// The mode a result was actually decided in.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ResultMode {
    Symbolic,
    Sampled,
    Numeric,
}

impl fmt::Display for ResultMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResultMode::Symbolic => "symbolic",
            ResultMode::Sampled => "sampled",
            ResultMode::Numeric => "numeric",
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    ProbablyPass,
    Fail,
    Skipped,
    Overflowed,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "Pass",
            Status::ProbablyPass => "ProbablyPass",
            Status::Fail => "Fail",
            Status::Skipped => "Skipped",
            Status::Overflowed => "Overflowed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub check_id: String,
    pub paper_anchor: String,
    pub mode: ResultMode,
    pub status: Status,
    pub residual_terms: u64,
    pub witness: Option<String>,
    pub time_ms: u64,
    pub notes: Vec<String>,
}

impl CheckResult {
    fn new(id: &str, anchor: &str, mode: ResultMode) -> Self {
        CheckResult {
            check_id: id.to_string(),
            paper_anchor: anchor.to_string(),
            mode,
            status: Status::Pass,
            residual_terms: 0,
            witness: None,
            time_ms: 0,
            notes: Vec::new(),
        }
    }

    fn fail(mut self, witness: String) -> Self {
        self.status = Status::Fail;
        self.witness = Some(witness);
        self
    }
}

/// Everything a run depends on.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub mode: Mode,
    pub samples: usize,
    pub seed: u64,
    pub budget: usize,
    pub precision: usize,
    /// Record wall-clock times in JSON (they are always shown in text).
    pub timings: bool,
    /// Points for the F and G scans; the default grid when `None`.
    pub grid: Option<Vec<GridPoint>>,
    /// |G| threshold for a nonzero verdict.
    pub g_min: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            suite: Suite::All,
            mode: Mode::Symbolic,
            samples: 200,
            seed: 0,
            budget: DEFAULT_TERM_BUDGET,
            precision: 128,
            timings: false,
            grid: None,
            g_min: 1e-8,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(EngineError::Config("samples must be at least 1".into()));
        }
        if self.budget == 0 {
            return Err(EngineError::Config("budget must be at least 1".into()));
        }
        if !(64..=4096).contains(&self.precision) {
            return Err(EngineError::Config("precision must be between 64 and 4096 bits".into()));
        }
        if !(self.g_min > 0.0) {
            return Err(EngineError::Config("g_min must be positive".into()));
        }
        Ok(())
    }

    pub fn num_config(&self) -> NumConfig {
        NumConfig::for_precision(self.precision)
    }
}

/// Note marking an overflow that sampling could not replace.
pub(crate) const NO_FALLBACK: &str = "sampled fallback unavailable";

/// A registered check: id, suite and a short description.
pub struct CheckInfo {
    pub id: &'static str,
    pub suite: Suite,
    pub anchor: &'static str,
}

/// Checks beyond the replay catalog.
const EXTRA_STATIC: &[(&str, &str)] = &[(
    "P17-order",
    "p17 = p17a - p17b formed before and after reducing the paired terms",
)];

pub fn registry() -> Vec<CheckInfo> {
    let mut v = Vec::new();
    for (id, a) in STATIC_CHECKS.iter().chain(EXTRA_STATIC) {
        v.push(CheckInfo { id, suite: Suite::Static, anchor: a });
    }
    for (id, a) in JET_CHECKS {
        v.push(CheckInfo { id, suite: Suite::Jet, anchor: a });
    }
    for (id, a) in numeric::NUMERIC_CHECKS {
        v.push(CheckInfo { id, suite: Suite::Numeric, anchor: a });
    }
    v
}

fn in_suite(s: Suite, want: Suite) -> bool {
    want == Suite::All || s == want
}

/// Configure the worker pool from `PMC_VERIFY_THREADS` once per process.
fn init_pool() {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| {
        if let Some(n) = std::env::var("PMC_VERIFY_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    });
}

/// Run every check of the suite. Numeric checks always run numerically.
pub fn run_suite(cfg: &VerifyConfig) -> Result<Report> {
    cfg.validate()?;
    init_pool();
    let started = Instant::now();
    let reg = registry();
    let exact: Vec<&CheckInfo> = reg
        .iter()
        .filter(|c| matches!(c.suite, Suite::Static | Suite::Jet) && in_suite(c.suite, cfg.suite))
        .collect();
    let numeric_ids: Vec<&CheckInfo> = reg
        .iter()
        .filter(|c| c.suite == Suite::Numeric && in_suite(c.suite, cfg.suite))
        .collect();

    let mut results = Vec::new();
    if !exact.is_empty() {
        results.extend(replay::run_exact(cfg, &exact)?);
    }
    if !numeric_ids.is_empty() {
        results.extend(numeric::run_numeric(cfg, &numeric_ids)?);
    }
    if !cfg.timings {
        for r in &mut results {
            r.time_ms = 0;
        }
    }
    Ok(Report::new(cfg, results, started.elapsed().as_millis() as u64))
}

/// Exit status: 0 all pass, 1 any Fail, 3 overflow without a usable fallback.
pub fn exit_code(r: &Report) -> i32 {
    if r.results.iter().any(|c| c.status == Status::Fail) {
        1
    } else if r.overflow_without_fallback {
        3
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique() {
        let reg = registry();
        let mut ids: Vec<_> = reg.iter().map(|c| c.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), reg.len());
    }

    #[test]
    fn bad_config_is_rejected() {
        let cfg = VerifyConfig {
            samples: 0,
            ..VerifyConfig::default()
        };
        assert!(matches!(run_suite(&cfg), Err(EngineError::Config(_))));
        let cfg = VerifyConfig {
            precision: 8,
            ..VerifyConfig::default()
        };
        assert!(matches!(run_suite(&cfg), Err(EngineError::Config(_))));
    }
}
