//! Floating-point checks at the special angles, the ODE demo and exact/float coherence.

use std::time::Instant;

use astro_float::{BigFloat, RoundingMode};
use rayon::prelude::*;

use super::{CheckInfo, CheckResult, ResultMode, Status, VerifyConfig};
use crate::catalog::{self, Catalog, ENTRIES};
use crate::domain::Symbolic;
use crate::error::{EngineError, Result};
use crate::kernel::poly::with_term_budget;
use crate::kernel::{eval_exact, sample_point, AlphaTag, TrigRational};
use crate::numeric::complex::{pi, real_from_rational};
use crate::numeric::scan::{default_grid, default_params, exact_scan, f_quarter_pi_identity};
use crate::numeric::{
    convergence_orders, eval_complex, ComplexF, GridPoint, NumConfig, NumPoint, OdeProblem, RootLab, RowStatus,
    ScanRow, Target,
};

pub(super) const NUMERIC_CHECKS: &[(&str, &str)] = &[
    ("F-quarter-pi", "F(pi/4, 0, 0) = 15 rho/(8b); 1.875 at rho = b = 1"),
    ("F-nonvanishing", "F does not vanish on the grid"),
    ("P16-special", "p16(pi/4, 0, 0) or p16(pi/3, 0, 0) is nonzero for every (rho, b)"),
    ("CUBIC-real", "cubic coefficients are real at the grid points; roots satisfy the cubic"),
    ("P23-candidates", "p23 has non-real nonzero roots with nonzero derivative denominator"),
    ("G-nonvanishing", "G is nonzero for every p23 candidate on the grid"),
    ("ODE-order", "RK4 for a' = p2 converges with order 4"),
    ("FLOAT-coherence", "floating evaluation of every catalog entry agrees with exact evaluation"),
];

/// Relative bound for the cubic coefficients' imaginary parts.
const REAL_TOL: f64 = 1e-20;
/// Bound for cubic root residuals.
const ROOT_RESIDUAL_TOL: f64 = 1e-25;
const COHERENCE_TOL: f64 = 1e-25;
const COHERENCE_POINTS: usize = 50;
const F_TOL: f64 = 1e-12;
/// Accepted range for observed RK4 orders.
const ORDER_RANGE: (f64, f64) = (3.7, 4.3);

struct Ctx<'a> {
    cfg: &'a VerifyConfig,
    num: NumConfig,
    cat: &'a Catalog<Symbolic>,
    grid: Vec<GridPoint>,
    printed: Option<&'a RootLab>,
    rederived: Option<&'a RootLab>,
}

pub(super) fn run_numeric(cfg: &VerifyConfig, checks: &[&CheckInfo]) -> Result<Vec<CheckResult>> {
    let started = Instant::now();
    let built = with_term_budget(cfg.budget, || -> Result<_> {
        let cat = catalog::symbolic()?;
        let num = cfg.num_config();
        let needs_roots = checks.iter().any(|c| matches!(c.id, "CUBIC-real" | "P23-candidates" | "G-nonvanishing"));
        let labs = if needs_roots {
            let printed = RootLab::new(&cat, num.clone())?;
            let rederived = RootLab::with_template(cat.g_template_with_p18(&TrigRational::zero())?, num.clone());
            Some((printed, rederived))
        } else {
            None
        };
        Ok((cat, labs))
    });
    let (cat, labs) = match built {
        Ok(b) => b,
        Err(e) => {
            // Without the catalog nothing numeric can run.
            return Ok(checks
                .iter()
                .map(|c| {
                    let r = CheckResult::new(c.id, c.anchor, ResultMode::Numeric);
                    if e.is_overflow() {
                        let mut r = r;
                        r.status = Status::Overflowed;
                        r.notes.push(format!("catalog construction: {e}"));
                        r.notes.push(super::NO_FALLBACK.into());
                        r
                    } else {
                        r.fail(format!("error: {e}"))
                    }
                })
                .collect());
        }
    };
    let setup_ms = started.elapsed().as_millis() as u64;
    let ctx = Ctx {
        cfg,
        num: cfg.num_config(),
        cat: &cat,
        grid: cfg.grid.clone().unwrap_or_else(|| default_grid(AlphaTag::Pi4)),
        printed: labs.as_ref().map(|l| &l.0),
        rederived: labs.as_ref().map(|l| &l.1),
    };

    let per: Vec<Vec<CheckResult>> = checks
        .par_iter()
        .map(|c| {
            let t0 = Instant::now();
            let mut rs = with_term_budget(cfg.budget, || one(&ctx, c));
            let ms = t0.elapsed().as_millis() as u64 + setup_ms;
            for r in &mut rs {
                r.time_ms = ms;
            }
            rs
        })
        .collect();
    Ok(per.into_iter().flatten().collect())
}

fn one(ctx: &Ctx, c: &CheckInfo) -> Vec<CheckResult> {
    let base = CheckResult::new(c.id, c.anchor, ResultMode::Numeric);
    let res = match c.id {
        "F-quarter-pi" => f_quarter_pi(ctx, base).map(|r| vec![r]),
        "F-nonvanishing" => f_nonvanishing(ctx, base).map(|r| vec![r]),
        "P16-special" => p16_special(ctx, base).map(|r| vec![r]),
        "CUBIC-real" => cubic_real(ctx, base).map(|r| vec![r]),
        "P23-candidates" => Ok(vec![
            p23(ctx, ctx.printed, base.clone()),
            p23(ctx, ctx.rederived, variant(&base, "rederived")),
        ]),
        "G-nonvanishing" => Ok(vec![
            g_nonvanishing(ctx, ctx.printed, base.clone()),
            g_nonvanishing(ctx, ctx.rederived, variant(&base, "rederived")),
        ]),
        "ODE-order" => ode_order(ctx, base).map(|r| vec![r]),
        "FLOAT-coherence" => coherence(ctx, base).map(|r| vec![r]),
        other => Err(EngineError::UnknownId(other.to_string())),
    };
    res.unwrap_or_else(|e| vec![CheckResult::new(c.id, c.anchor, ResultMode::Numeric).fail(format!("error: {e}"))])
}

fn variant(base: &CheckResult, suffix: &str) -> CheckResult {
    let mut r = base.clone();
    r.check_id = format!("{}/{suffix}", base.check_id);
    r.notes.push("p18 replaced by its rederived value 0".into());
    r
}

fn f_quarter_pi(ctx: &Ctx, mut r: CheckResult) -> Result<CheckResult> {
    let identity = f_quarter_pi_identity(ctx.cat)?;
    r.notes.push(format!("8b N - 15 rho D vanishes identically at alpha = pi/4, a = 0: {identity}"));
    let pt = GridPoint::new(
        AlphaTag::Pi4,
        Default::default(),
        crate::kernel::rational::rat(1, 1),
        crate::kernel::rational::rat(1, 1),
    )?;
    let v = eval_complex(ctx.cat.get("F")?, &pt.num_point(ctx.num.precision), &ctx.num)?;
    let err = v.dist_f64(&ComplexF::from_f64(1.875, 0.0, ctx.num.precision)?);
    r.notes.push(format!("F(pi/4, 0, 0; rho = 1, b = 1) = {v}"));
    if !identity {
        return Ok(r.fail("F(pi/4, 0, 0) differs from 15 rho/(8b) as a function of rho, b".into()));
    }
    if !(err < F_TOL) {
        return Ok(r.fail(format!("|F - 1.875| = {err:.3e} at {pt}")));
    }
    Ok(r)
}

fn row_note(row: &ScanRow) -> String {
    let br = row.branch.as_deref().map(|b| format!(" [P = {b}]")).unwrap_or_default();
    match &row.status {
        RowStatus::Nonzero | RowStatus::Zero => {
            format!("{} at {}{br}: {} (|.| = {:.6e})", row.target, row.point, row.value, row.magnitude)
        }
        RowStatus::Pole => format!("{} at {}{br}: pole", row.target, row.point),
        RowStatus::Error(e) => format!("{} at {}{br}: {e}", row.target, row.point),
    }
}

fn f_nonvanishing(ctx: &Ctx, mut r: CheckResult) -> Result<CheckResult> {
    let rows = exact_scan(Target::F, &ctx.grid, ctx.cat)?;
    let mut bad = None;
    let mut poles = 0;
    for row in &rows {
        match row.status {
            RowStatus::Nonzero => {}
            RowStatus::Pole => poles += 1,
            _ => {
                bad.get_or_insert_with(|| row_note(row));
            }
        }
    }
    let mags: Vec<f64> = rows.iter().filter(|x| x.status == RowStatus::Nonzero).map(|x| x.magnitude).collect();
    r.notes.push(format!(
        "{} grid points, {} poles, min |F| = {:.6e}",
        rows.len(),
        poles,
        mags.iter().copied().fold(f64::INFINITY, f64::min)
    ));
    if let Some(w) = bad {
        return Ok(r.fail(w));
    }
    if mags.is_empty() {
        return Ok(r.fail("every grid point is a pole".into()));
    }
    Ok(r)
}

fn p16_special(ctx: &Ctx, mut r: CheckResult) -> Result<CheckResult> {
    // (ρ, b) pairs come from the grid when one is given.
    let params: Vec<_> = match &ctx.cfg.grid {
        Some(g) => {
            let mut v: Vec<_> = Vec::new();
            for p in g {
                if !v.contains(&(p.rho.clone(), p.b.clone())) {
                    v.push((p.rho.clone(), p.b.clone()));
                }
            }
            v
        }
        None => default_params(),
    };
    let mk = |alpha: AlphaTag| -> Result<Vec<GridPoint>> {
        params
            .iter()
            .map(|(rho, b)| GridPoint::new(alpha.clone(), Default::default(), rho.clone(), b.clone()))
            .collect()
    };
    let at4 = exact_scan(Target::P16, &mk(AlphaTag::Pi4)?, ctx.cat)?;
    let at3 = exact_scan(Target::P16, &mk(AlphaTag::Pi3)?, ctx.cat)?;
    let mut bad = None;
    for (x, y) in at4.iter().zip(&at3) {
        r.notes.push(format!("rho={},b={}: p16(pi/4) = {}; p16(pi/3) = {}", x.point.rho, x.point.b, show(x), show(y)));
        if x.status != RowStatus::Nonzero && y.status != RowStatus::Nonzero && bad.is_none() {
            bad = Some(format!("p16 vanishes or is undefined at both angles for rho={}, b={}", x.point.rho, x.point.b));
        }
    }
    Ok(match bad {
        Some(w) => r.fail(w),
        None => r,
    })
}

fn show(row: &ScanRow) -> String {
    match &row.status {
        RowStatus::Nonzero | RowStatus::Zero => row.value.clone(),
        RowStatus::Pole => "pole".into(),
        RowStatus::Error(e) => e.clone(),
    }
}

fn cubic_real(ctx: &Ctx, mut r: CheckResult) -> Result<CheckResult> {
    let lab = ctx.printed.ok_or_else(|| EngineError::Config("cubic not prepared".into()))?;
    let rows: Vec<_> = ctx
        .grid
        .par_iter()
        .map(|pt| (pt, lab.roots_at(&pt.num_point(ctx.num.precision))))
        .collect();
    let mut worst_imag = 0.0f64;
    let mut worst_res = 0.0f64;
    let mut bad = None;
    for (pt, res) in rows {
        match res {
            Ok((c, roots)) => {
                worst_imag = worst_imag.max(c.max_rel_imag);
                worst_res = worst_res.max(roots.max_residual());
                if pt.a.im.is_zero() && !(c.max_rel_imag < REAL_TOL) && bad.is_none() {
                    bad = Some(format!("relative imaginary part {:.3e} at {pt}", c.max_rel_imag));
                }
                if !(roots.max_residual() < ROOT_RESIDUAL_TOL) && bad.is_none() {
                    bad = Some(format!("root residual {:.3e} at {pt}", roots.max_residual()));
                }
            }
            Err(e) if e.is_pole() => r.notes.push(format!("pole at {pt}")),
            Err(e) => {
                bad.get_or_insert_with(|| format!("{e} at {pt}"));
            }
        }
    }
    r.notes.push(format!("max relative imaginary part {worst_imag:.3e}; max root residual {worst_res:.3e}"));
    Ok(match bad {
        Some(w) => r.fail(w),
        None => r,
    })
}

fn p23(ctx: &Ctx, lab: Option<&RootLab>, mut r: CheckResult) -> CheckResult {
    let Some(lab) = lab else {
        return r.fail("cubic not prepared".into());
    };
    let rows: Vec<_> = ctx
        .grid
        .par_iter()
        .map(|pt| {
            let np = pt.num_point(ctx.num.precision);
            let out = lab.p23_candidates(&np).and_then(|cands| {
                let cubic = lab.cubic_at(&np)?.coeffs;
                let mut dens = Vec::new();
                for c in &cands {
                    dens.push(lab.derivative_denominator(&cubic, &c.root));
                }
                Ok((cands, dens))
            });
            (pt, out)
        })
        .collect();
    let mut bad = None;
    for (pt, out) in rows {
        match out {
            Ok((cands, dens)) => {
                let roots: Vec<String> = cands.iter().map(|c| c.root.to_string()).collect();
                r.notes.push(format!("{pt}: {}", roots.join(", ")));
                for (c, d) in cands.iter().zip(&dens) {
                    let fail = if !c.non_real {
                        Some("real candidate".to_string())
                    } else if c.root.is_zero() {
                        Some("zero candidate".to_string())
                    } else {
                        d.as_ref().err().map(|e| e.to_string())
                    };
                    if let (Some(why), None) = (fail, &bad) {
                        bad = Some(format!("{why}: P = {} at {pt}", c.root));
                    }
                }
            }
            Err(e) => {
                r.notes.push(format!("{pt}: {e}"));
                bad.get_or_insert_with(|| format!("{e} at {pt}"));
            }
        }
    }
    match bad {
        Some(w) => r.fail(w),
        None => r,
    }
}

fn g_nonvanishing(ctx: &Ctx, lab: Option<&RootLab>, mut r: CheckResult) -> CheckResult {
    let Some(lab) = lab else {
        return r.fail("cubic not prepared".into());
    };
    let rows: Vec<_> = ctx
        .grid
        .par_iter()
        .map(|pt| (pt, lab.g_at(&pt.num_point(ctx.num.precision))))
        .collect();
    let mut bad = None;
    let mut min_g = f64::INFINITY;
    let mut sym_dev = 0.0f64;
    for (pt, out) in rows {
        match out {
            Ok(vals) => {
                let mut parts = Vec::new();
                for (c, g) in &vals {
                    match g {
                        Ok(g) => {
                            let m = g.abs_f64();
                            min_g = min_g.min(m);
                            parts.push(format!("|G| = {m:.6e}"));
                            if !(m > ctx.cfg.g_min) && bad.is_none() {
                                bad = Some(format!("|G| = {m:.3e} for P = {} at {pt}", c.root));
                            }
                        }
                        Err(e) => {
                            parts.push(e.to_string());
                            bad.get_or_insert_with(|| format!("{e} for P = {} at {pt}", c.root));
                        }
                    }
                }
                // The two members of a pair should give conjugate values.
                if let [(_, Ok(g0)), (_, Ok(g1))] = vals.as_slice() {
                    sym_dev = sym_dev.max(g0.conj().rel_err_f64(g1));
                }
                r.notes.push(format!("{pt}: {}", parts.join(", ")));
            }
            Err(e) => {
                r.notes.push(format!("{pt}: {e}"));
                bad.get_or_insert_with(|| format!("no G value, {e}, at {pt}"));
            }
        }
    }
    r.notes.push(format!("min |G| = {min_g:.6e}; max relative deviation from conjugate symmetry {sym_dev:.3e}"));
    match bad {
        Some(w) => r.fail(w),
        None => r,
    }
}

fn ode_order(ctx: &Ctx, mut r: CheckResult) -> Result<CheckResult> {
    let p = ctx.num.precision;
    let p2 = ctx.cat.get("p2")?;
    let one = ComplexF::from_int(1, p);
    let prob = OdeProblem::new(p2, one.clone(), one, ctx.num.clone());
    let alpha0 = pi(p).div(&BigFloat::from_u64(4, p), p, RoundingMode::ToEven);
    let alpha1 = alpha0.add(&real_from_rational(&crate::kernel::rational::rat(1, 1), p), p, RoundingMode::ToEven);
    let (errors, orders) = convergence_orders(&prob, &alpha0, &ComplexF::zero(p), &alpha1, ODE_STEP, 3)?;
    r.notes.push(format!(
        "alpha from pi/4 to pi/4 + 1, a0 = 0, rho = b = 1, steps {ODE_STEP} / 2^k against step/64"
    ));
    r.notes.push(format!(
        "errors {}",
        errors.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>().join(", ")
    ));
    r.notes.push(format!(
        "orders {}",
        orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>().join(", ")
    ));
    if let Some(o) = orders.iter().find(|o| !(ORDER_RANGE.0..=ORDER_RANGE.1).contains(*o)) {
        return Ok(r.fail(format!("observed order {o:.3} outside [{}, {}]", ORDER_RANGE.0, ORDER_RANGE.1)));
    }
    Ok(r)
}

/// Coarsest step of the ODE order check.
const ODE_STEP: f64 = 0.1;

fn coherence(ctx: &Ctx, mut r: CheckResult) -> Result<CheckResult> {
    let p = ctx.num.precision;
    let ids: Vec<&str> = ENTRIES.iter().map(|(id, _)| *id).collect();
    let rows: Vec<(usize, usize, f64, Option<String>)> = (0..COHERENCE_POINTS as u64)
        .into_par_iter()
        .map(|k| {
            let pt = sample_point(ctx.cfg.seed.wrapping_add(0xC0FFEE).wrapping_add(k));
            let np = NumPoint::from_sample(&pt, p);
            let mut compared = 0;
            let mut skipped = 0;
            let mut worst = 0.0f64;
            let mut bad = None;
            for id in &ids {
                let Ok(e) = ctx.cat.get(id) else { continue };
                let exact = match eval_exact(e, &pt) {
                    Ok(v) => v,
                    Err(err) if err.is_pole() => {
                        skipped += 1;
                        continue;
                    }
                    Err(err) => {
                        bad.get_or_insert_with(|| format!("{id}: {err} at {pt}"));
                        continue;
                    }
                };
                let float = match eval_complex(e, &np, &ctx.num) {
                    Ok(v) => v,
                    Err(err) if err.is_pole() => {
                        skipped += 1;
                        continue;
                    }
                    Err(err) => {
                        bad.get_or_insert_with(|| format!("{id}: {err} at {pt}"));
                        continue;
                    }
                };
                let want = ComplexF::from_gaussian(&exact, p);
                let rel = if exact.is_zero() { float.abs_f64() } else { float.rel_err_f64(&want) };
                compared += 1;
                worst = worst.max(rel);
                if !(rel < COHERENCE_TOL) {
                    bad.get_or_insert_with(|| format!("{id}: relative error {rel:.3e} at {pt}"));
                }
            }
            (compared, skipped, worst, bad)
        })
        .collect();
    let compared: usize = rows.iter().map(|x| x.0).sum();
    let skipped: usize = rows.iter().map(|x| x.1).sum();
    let worst = rows.iter().map(|x| x.2).fold(0.0, f64::max);
    r.notes.push(format!(
        "{} entries at {COHERENCE_POINTS} points: {compared} comparisons, {skipped} poles, worst relative error {worst:.3e}",
        ids.len()
    ));
    if let Some(w) = rows.into_iter().find_map(|x| x.3) {
        return Ok(r.fail(w));
    }
    Ok(r)
}
