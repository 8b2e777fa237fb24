//! Static and jet checks in symbolic or sampled mode.

use std::time::Instant;

use rayon::prelude::*;

use super::{CheckInfo, CheckResult, Mode, ResultMode, Status, VerifyConfig, NO_FALLBACK};
use crate::catalog::{self, Catalog};
use crate::domain::series::{SeriesDomain, MAX_ORDER};
use crate::domain::{Domain, Symbolic};
use crate::error::{EngineError, Result};
use crate::jet::checks::{self, Env, Evidence};
use crate::jet::JetPoly;
use crate::kernel::poly::with_term_budget;
use crate::kernel::{eval_exact, sample_point, SamplePoint, TrigRational};

/// Series order the sampled runner starts at.
const START_ORDER: usize = 3;

pub(super) fn run_exact(cfg: &VerifyConfig, checks: &[&CheckInfo]) -> Result<Vec<CheckResult>> {
    match cfg.mode {
        Mode::Symbolic => symbolic(cfg, checks),
        Mode::Sampled => {
            let ids: Vec<&str> = checks.iter().map(|c| c.id).filter(|id| *id != "P17-order").collect();
            let mut sampled = sampled(cfg, &ids);
            let mut out = Vec::new();
            for c in checks {
                if c.id == "P17-order" {
                    let mut r = CheckResult::new(c.id, c.anchor, ResultMode::Sampled);
                    r.status = Status::Skipped;
                    r.notes.push("compares symbolic intermediate sizes; symbolic mode only".into());
                    out.push(r);
                } else {
                    out.extend(sampled.remove(c.id).unwrap_or_default());
                }
            }
            Ok(out)
        }
    }
}

/// Results per check id, a check expanding to itself plus its variants.
type ById = rustc_hash::FxHashMap<String, Vec<CheckResult>>;

fn symbolic(cfg: &VerifyConfig, checks: &[&CheckInfo]) -> Result<Vec<CheckResult>> {
    let started = Instant::now();
    let built = with_term_budget(cfg.budget, || -> Result<(Catalog<Symbolic>, Catalog<Symbolic>)> {
        Ok((catalog::symbolic()?, catalog::symbolic_mirrored()?))
    });
    let (cat, mir) = match built {
        Ok(c) => c,
        Err(e) if e.is_overflow() => {
            // Nothing symbolic is possible; every check falls back.
            let ids: Vec<&str> = checks.iter().map(|c| c.id).filter(|id| *id != "P17-order").collect();
            let mut fb = sampled(cfg, &ids);
            let mut out = Vec::new();
            for c in checks {
                if c.id == "P17-order" {
                    let mut r = CheckResult::new(c.id, c.anchor, ResultMode::Symbolic);
                    r.status = Status::Overflowed;
                    r.notes.push(format!("catalog construction: {e}; no sampled form"));
                    r.notes.push(NO_FALLBACK.into());
                    out.push(r);
                    continue;
                }
                for mut r in fb.remove(c.id).unwrap_or_default() {
                    mark_overflowed(&mut r, &format!("catalog construction: {e}"));
                    out.push(r);
                }
            }
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let build_ms = started.elapsed().as_millis() as u64;
    let env = Env::new(&Symbolic, &cat, &mir)?;

    let per_check: Vec<Vec<CheckResult>> = checks
        .par_iter()
        .map(|c| {
            let t0 = Instant::now();
            let mut rs = with_term_budget(cfg.budget, || symbolic_one(cfg, c, &env));
            let ms = t0.elapsed().as_millis() as u64;
            for r in &mut rs {
                r.time_ms = ms;
            }
            rs
        })
        .collect();

    // Overflowed checks are redone on sampled points, all in one pass.
    let pending: Vec<&str> = checks
        .iter()
        .zip(&per_check)
        .filter(|(_, rs)| rs.iter().any(|r| r.status == Status::Overflowed))
        .map(|(c, _)| c.id)
        .filter(|id| *id != "P17-order")
        .collect();
    let mut fb = if pending.is_empty() { ById::default() } else { sampled(cfg, &pending) };

    let mut out = Vec::new();
    for (c, rs) in checks.iter().zip(per_check) {
        match fb.remove(c.id) {
            Some(replacement) if rs.iter().any(|r| r.status == Status::Overflowed) => {
                let why = rs[0].notes.first().cloned().unwrap_or_default();
                for mut r in replacement {
                    mark_overflowed(&mut r, &why);
                    out.push(r);
                }
            }
            _ => out.extend(rs),
        }
    }
    if cfg.timings {
        if let Some(first) = out.first_mut() {
            first.notes.push(format!("catalog build {build_ms} ms"));
        }
    }
    Ok(out)
}

fn mark_overflowed(r: &mut CheckResult, why: &str) {
    r.notes.insert(0, format!("symbolic budget exceeded ({why}); sampled fallback"));
    // A sampled disproof stays a Fail; otherwise the overflow is the headline.
    if r.status != Status::Fail {
        if r.status != Status::ProbablyPass {
            r.notes.push(NO_FALLBACK.into());
        }
        r.status = Status::Overflowed;
    }
}

fn symbolic_one(cfg: &VerifyConfig, c: &CheckInfo, env: &Env<Symbolic>) -> Vec<CheckResult> {
    let mut r = CheckResult::new(c.id, c.anchor, ResultMode::Symbolic);
    if c.id == "P17-order" {
        match catalog::p17_orders(env.cat) {
            Ok(rep) => {
                r.notes.push(format!("peak terms reducing p17a and p17b separately: {}", rep.after_reduction_peak));
                r.notes.push(format!("peak terms combining paired terms first: {}", rep.before_reduction_peak));
                r.notes.push(format!("paired terms cancel: {}", rep.paired_terms_cancel));
                if !rep.results_agree {
                    return vec![r.fail("the two orders give different p17".into())];
                }
            }
            Err(e) if e.is_overflow() => {
                r.status = Status::Overflowed;
                r.notes.push(e.to_string());
                r.notes.push(NO_FALLBACK.into());
            }
            Err(e) => return vec![r.fail(format!("error: {e}"))],
        }
        return vec![r];
    }
    match checks::run(c.id, env) {
        Ok(ev) => expand(c, ev, ResultMode::Symbolic, |rr| symbolic_verdict(cfg, rr)),
        Err(e) if e.is_overflow() => {
            r.status = Status::Overflowed;
            r.notes.push(e.to_string());
            vec![r]
        }
        Err(e) => vec![r.fail(format!("error: {e}"))],
    }
}

/// Residual term count and, if nonzero, a witness.
fn symbolic_verdict(cfg: &VerifyConfig, residuals: &[(String, JetPoly<TrigRational>)]) -> (u64, Option<String>) {
    let terms: usize = residuals.iter().map(|(_, r)| r.term_count()).sum();
    let witness = residuals
        .iter()
        .find(|(_, r)| !r.is_empty())
        .map(|(name, r)| {
            let (m, coeff) = r.terms().next().expect("nonempty residual");
            let at = first_nonzero_value(coeff, cfg.seed);
            format!("{name}: coefficient of {m} is nonzero; {at}")
        });
    (terms as u64, witness)
}

fn first_nonzero_value(e: &TrigRational, seed: u64) -> String {
    for k in 0..64 {
        let pt = sample_point(seed.wrapping_add(k));
        if let Ok(v) = eval_exact(e, &pt) {
            if !v.is_zero() {
                return format!("value {v} at {pt}");
            }
        }
    }
    "no admissible witness point found".into()
}

/// Turn evidence into the main result plus one result per variant.
fn expand<E: Clone>(
    c: &CheckInfo,
    ev: Evidence<E>,
    mode: ResultMode,
    verdict: impl Fn(&[(String, JetPoly<E>)]) -> (u64, Option<String>),
) -> Vec<CheckResult> {
    let mut main = CheckResult::new(c.id, c.anchor, mode);
    let (terms, witness) = verdict(&ev.residuals);
    main.residual_terms = terms;
    if let Some(s) = ev.sign {
        main.notes.push(format!("sign {s:+}"));
    }
    main.notes.extend(ev.notes);
    if let Some(w) = witness {
        main = main.fail(w);
    }
    let mut out = vec![main];
    for (suffix, rs) in ev.variants {
        let id = format!("{}/{suffix}", c.id);
        let mut r = CheckResult::new(&id, c.anchor, mode);
        let (terms, witness) = verdict(&rs);
        r.residual_terms = terms;
        if let Some(w) = witness {
            r = r.fail(w);
        }
        out.push(r);
    }
    out
}

/// Everything one check produced at one sample point.
#[derive(Clone)]
struct PointOutcome {
    /// (result id, first nonzero residual rendered) for the check and each variant.
    verdicts: Vec<(String, Option<String>)>,
    notes: Vec<String>,
    sign: Option<i32>,
}

enum AtPoint {
    Done(Vec<Result<PointOutcome>>),
    Pole,
    Err(EngineError),
}

fn run_at_point(pt: &SamplePoint, ids: &[&str]) -> AtPoint {
    let mut order = START_ORDER;
    loop {
        match try_at_point(pt, ids, order) {
            Err(EngineError::SeriesOrderExhausted) if order < MAX_ORDER => order += 1,
            Err(e) if e.is_pole() => return AtPoint::Pole,
            Err(e) => return AtPoint::Err(e),
            Ok(outs) => {
                if outs.iter().any(|o| matches!(o, Err(e) if e.is_pole())) {
                    return AtPoint::Pole;
                }
                if order < MAX_ORDER && outs.iter().any(|o| matches!(o, Err(EngineError::SeriesOrderExhausted))) {
                    order += 1;
                    continue;
                }
                return AtPoint::Done(outs);
            }
        }
    }
}

fn try_at_point(pt: &SamplePoint, ids: &[&str], order: usize) -> Result<Vec<Result<PointOutcome>>> {
    let d = SeriesDomain::at_point(pt, order);
    let cat = Catalog::build(&d, false)?;
    let mir = Catalog::build(&d, true)?;
    let env = Env::new(&d, &cat, &mir)?;
    Ok(ids
        .iter()
        .map(|id| {
            let ev = checks::run(id, &env)?;
            let first = |rs: &[(String, JetPoly<_>)]| {
                rs.iter().find_map(|(name, r)| {
                    r.terms()
                        .find(|(_, c)| !d.value_is_zero(c))
                        .map(|(m, c)| format!("{name}: coefficient of {m} = {}", d.describe(c)))
                })
            };
            let mut verdicts = vec![(id.to_string(), first(&ev.residuals))];
            for (suffix, rs) in &ev.variants {
                verdicts.push((format!("{id}/{suffix}"), first(rs)));
            }
            Ok(PointOutcome {
                verdicts,
                notes: ev.notes,
                sign: ev.sign,
            })
        })
        .collect())
}

/// Per-check aggregation over accepted points.
struct Tally {
    id: String,
    anchor: &'static str,
    points: usize,
    notes: Option<Vec<String>>,
    sign: Option<Option<i32>>,
    unstable: Vec<String>,
    /// (result id, witness) in first-seen order.
    results: Vec<(String, Option<String>)>,
    error: Option<String>,
}

fn sampled(cfg: &VerifyConfig, ids: &[&str]) -> ById {
    let started = Instant::now();
    let mut tallies: Vec<Tally> = ids
        .iter()
        .map(|id| Tally {
            id: id.to_string(),
            anchor: checks::anchor(id).unwrap_or(""),
            points: 0,
            notes: None,
            sign: None,
            unstable: Vec::new(),
            results: Vec::new(),
            error: None,
        })
        .collect();
    let n = cfg.samples;
    let mut accepted = 0usize;
    let mut skipped = 0usize;
    let mut next = 0u64;
    let mut fatal: Option<String> = None;
    while accepted < n && fatal.is_none() {
        if skipped > 10 * n + 100 {
            fatal = Some(format!("too many poles: {skipped} points skipped"));
            break;
        }
        // Batches are evaluated in parallel and consumed in seed order.
        let want = (n - accepted) + (n - accepted) / 8 + 1;
        let ks: Vec<u64> = (next..next + want as u64).collect();
        next += want as u64;
        let outs: Vec<(SamplePoint, AtPoint)> = ks
            .par_iter()
            .map(|k| {
                let pt = sample_point(cfg.seed.wrapping_mul(1_000_003).wrapping_add(*k));
                let o = with_term_budget(cfg.budget, || run_at_point(&pt, ids));
                (pt, o)
            })
            .collect();
        for (pt, o) in outs {
            if accepted == n {
                break;
            }
            match o {
                AtPoint::Pole => skipped += 1,
                AtPoint::Err(e) => {
                    fatal = Some(format!("{e} at {pt}"));
                    break;
                }
                AtPoint::Done(per) => {
                    accepted += 1;
                    for (t, res) in tallies.iter_mut().zip(per) {
                        absorb(t, &pt, res);
                    }
                }
            }
        }
    }
    let ms = started.elapsed().as_millis() as u64;

    let mut out = ById::default();
    for t in tallies {
        let mut rs = Vec::new();
        let results = if t.results.is_empty() {
            vec![(t.id.clone(), None)]
        } else {
            t.results
        };
        for (k, (rid, witness)) in results.into_iter().enumerate() {
            let mut r = CheckResult::new(&rid, t.anchor, ResultMode::Sampled);
            r.time_ms = ms;
            r.notes.push(format!("exact series evaluation at {} sample points ({} skipped as poles)", t.points, skipped));
            if k == 0 {
                if let Some(Some(s)) = t.sign {
                    r.notes.push(format!("sign {s:+}"));
                }
                r.notes.extend(t.notes.clone().unwrap_or_default());
                r.notes.extend(t.unstable.iter().cloned());
            }
            if let Some(w) = witness {
                r.residual_terms = 1;
                r = r.fail(w);
            } else if let Some(e) = t.error.as_ref().or(fatal.as_ref()) {
                r = r.fail(format!("error: {e}"));
            } else if t.points < n {
                r.status = Status::Skipped;
                r.notes.push(format!("only {} of {n} points evaluated", t.points));
            } else {
                r.status = Status::ProbablyPass;
            }
            rs.push(r);
        }
        out.insert(t.id, rs);
    }
    out
}

fn absorb(t: &mut Tally, pt: &SamplePoint, res: Result<PointOutcome>) {
    let o = match res {
        Ok(o) => o,
        Err(e) => {
            if t.error.is_none() {
                t.error = Some(format!("{e} at {pt}"));
            }
            return;
        }
    };
    t.points += 1;
    for (rid, w) in o.verdicts {
        match t.results.iter_mut().find(|(k, _)| *k == rid) {
            Some(slot) => {
                if slot.1.is_none() {
                    slot.1 = w.map(|w| format!("{w} at {pt}"));
                }
            }
            None => t.results.push((rid, w.map(|w| format!("{w} at {pt}")))),
        }
    }
    match &t.notes {
        None => t.notes = Some(o.notes),
        Some(n) if *n != o.notes && t.unstable.is_empty() => {
            t.unstable.push(format!("notes differ at {pt}: {}", o.notes.join("; ")));
        }
        _ => {}
    }
    match t.sign {
        None => t.sign = Some(o.sign),
        Some(s) if s != o.sign && t.unstable.len() < 2 => {
            t.unstable.push(format!("sign differs at {pt}: {:?}", o.sign));
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{registry, Suite};

    fn infos(ids: &[&str]) -> Vec<CheckInfo> {
        registry().into_iter().filter(|c| ids.contains(&c.id)).collect()
    }

    #[test]
    fn sampled_replay_agrees_with_symbolic() {
        let cfg = VerifyConfig {
            mode: Mode::Sampled,
            samples: 6,
            seed: 3,
            suite: Suite::Jet,
            ..VerifyConfig::default()
        };
        let cs = infos(&["E35", "E321", "E322-residual"]);
        let refs: Vec<&CheckInfo> = cs.iter().collect();
        let rs = run_exact(&cfg, &refs).unwrap();
        let by: Vec<(&str, Status)> = rs.iter().map(|r| (r.check_id.as_str(), r.status)).collect();
        assert_eq!(
            by,
            [
                ("E35", Status::ProbablyPass),
                ("E321", Status::ProbablyPass),
                ("E322-residual", Status::Fail),
                ("E322-residual/rederived", Status::ProbablyPass),
            ]
        );
        assert!(rs[2].witness.as_deref().unwrap().contains(" at t="));
    }

    #[test]
    fn tiny_budget_falls_back_to_sampling() {
        let cfg = VerifyConfig {
            samples: 3,
            budget: 50,
            ..VerifyConfig::default()
        };
        let cs = infos(&["IDS39"]);
        let refs: Vec<&CheckInfo> = cs.iter().collect();
        let rs = run_exact(&cfg, &refs).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].mode, ResultMode::Sampled);
        assert_eq!(rs[0].status, Status::Overflowed);
        assert!(rs[0].notes[0].contains("sampled fallback"), "{:?}", rs[0].notes);
    }
}
