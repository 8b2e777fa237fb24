//! Report assembly and emission as JSON or a fixed-width table.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::{CheckResult, Mode, Status, Suite, VerifyConfig, NO_FALLBACK};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigSnapshot {
    pub suite: Suite,
    pub mode: Mode,
    pub samples: usize,
    pub seed: u64,
    pub budget: usize,
    pub precision: usize,
    pub tolerances: Tolerances,
    pub grid: Vec<String>,
    pub timings: bool,
}

/// Tolerances as printed strings so the JSON does not depend on float formatting.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub tol_den: String,
    pub tol_root: String,
    pub tol_conj: String,
    pub tol_lead: String,
    pub tol_real: String,
    pub tol_imag: String,
    pub g_min: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub probably_pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub overflowed: usize,
    pub total: usize,
}

impl Summary {
    pub fn of(results: &[CheckResult]) -> Self {
        let mut s = Summary::default();
        for r in results {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::ProbablyPass => s.probably_pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped => s.skipped += 1,
                Status::Overflowed => s.overflowed += 1,
            }
        }
        s.total = results.len();
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub config: ConfigSnapshot,
    pub results: Vec<CheckResult>,
    pub summary: Summary,
    /// Wall time of the whole run; only shown in text output.
    #[serde(skip)]
    pub total_ms: u64,
    #[serde(skip)]
    pub overflow_without_fallback: bool,
}

fn e(x: f64) -> String {
    format!("{x:.3e}")
}

impl Report {
    pub fn new(cfg: &VerifyConfig, results: Vec<CheckResult>, total_ms: u64) -> Self {
        let n = cfg.num_config();
        let config = ConfigSnapshot {
            suite: cfg.suite,
            mode: cfg.mode,
            samples: cfg.samples,
            seed: cfg.seed,
            budget: cfg.budget,
            precision: cfg.precision,
            tolerances: Tolerances {
                tol_den: e(n.tol_den),
                tol_root: e(n.tol_root),
                tol_conj: e(n.tol_conj),
                tol_lead: e(n.tol_lead),
                tol_real: e(n.tol_real),
                tol_imag: e(n.tol_imag),
                g_min: e(cfg.g_min),
            },
            grid: match &cfg.grid {
                Some(g) => g.iter().map(|p| p.to_string()).collect(),
                None => vec!["default".into()],
            },
            timings: cfg.timings,
        };
        let overflow_without_fallback = results
            .iter()
            .any(|r| r.status == Status::Overflowed && r.notes.iter().any(|n| n == NO_FALLBACK));
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            summary: Summary::of(&results),
            config,
            results,
            total_ms: if cfg.timings { total_ms } else { 0 },
            overflow_without_fallback,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Fixed-width table, one row per result, then notes and witnesses.
    pub fn to_text(&self) -> String {
        let idw = self.results.iter().map(|r| r.check_id.len()).max().unwrap_or(8).max(8);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<idw$}  {:<9}  {:<12}  {:>9}  {:>8}",
            "check", "mode", "status", "residual", "ms"
        );
        let _ = writeln!(out, "{}", "-".repeat(idw + 47));
        for r in &self.results {
            let _ = writeln!(
                out,
                "{:<idw$}  {:<9}  {:<12}  {:>9}  {:>8}",
                r.check_id,
                r.mode.to_string(),
                r.status.to_string(),
                r.residual_terms,
                r.time_ms
            );
        }
        let s = &self.summary;
        let _ = writeln!(out, "{}", "-".repeat(idw + 47));
        let _ = writeln!(
            out,
            "pass {}  probably_pass {}  fail {}  skipped {}  overflowed {}  total {}",
            s.pass, s.probably_pass, s.fail, s.skipped, s.overflowed, s.total
        );
        if self.total_ms > 0 {
            let _ = writeln!(out, "wall time {} ms", self.total_ms);
        }
        for r in &self.results {
            if r.witness.is_none() && r.notes.is_empty() {
                continue;
            }
            let _ = writeln!(out, "\n{} [{}]", r.check_id, r.paper_anchor);
            if let Some(w) = &r.witness {
                let _ = writeln!(out, "  witness: {w}");
            }
            for n in &r.notes {
                let _ = writeln!(out, "  {n}");
            }
        }
        out
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn write_text(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::ResultMode;

    #[test]
    fn empty_report_has_zero_summary() {
        let r = Report::new(&VerifyConfig::default(), Vec::new(), 17);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["results"], serde_json::json!([]));
        assert_eq!(v["summary"]["total"], 0);
        assert_eq!(v["summary"]["fail"], 0);
        assert!(v.get("total_ms").is_none());
    }

    #[test]
    fn single_pass_and_reemission() {
        let c = CheckResult::new("X", "anchor", ResultMode::Symbolic);
        let r = Report::new(&VerifyConfig::default(), vec![c], 0);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["summary"]["pass"], 1);
        assert_eq!(v["summary"]["fail"], 0);
        assert_eq!(v["results"][0]["check_id"], "X");
        assert_eq!(v["results"][0]["mode"], "symbolic");
        assert_eq!(v["results"][0]["status"], "Pass");
        assert_eq!(v["results"][0]["time_ms"], 0);
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
        r.write_json(&a).unwrap();
        r.write_json(&b).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert!(r.to_text().contains("X "));
    }
}
