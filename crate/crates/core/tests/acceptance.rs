//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use pmc_verify::verify::{registry, run_suite, CheckResult, Mode, Report, Status, Suite, VerifyConfig};

struct Line {
    label: &'static str,
    ok: bool,
    detail: String,
}

fn find<'r>(r: &'r Report, id: &str) -> Option<&'r CheckResult> {
    r.results.iter().find(|c| c.check_id == id)
}

fn status_of(r: &Report, id: &str) -> String {
    match find(r, id) {
        Some(c) => format!("{id} {}", c.status),
        None => format!("{id} missing"),
    }
}

/// Every id passes exactly, with zero residual.
fn all_exact(r: &Report, ids: &[&str]) -> bool {
    ids.iter().all(|id| find(r, id).is_some_and(|c| c.status == Status::Pass && c.residual_terms == 0))
}

/// Pass, or a sampled verdict with zero residual at every accepted point.
fn replay_ok(c: &CheckResult) -> bool {
    match c.status {
        Status::Pass => c.residual_terms == 0,
        Status::ProbablyPass | Status::Overflowed => c.residual_terms == 0 && c.witness.is_none(),
        _ => false,
    }
}

fn first_witness(r: &Report, ids: &[&str]) -> String {
    ids.iter()
        .filter_map(|id| find(r, id))
        .find(|c| c.status != Status::Pass)
        .and_then(|c| c.witness.clone().map(|w| format!("; {}: {w}", c.check_id)))
        .unwrap_or_default()
}

fn criterion_1() -> Line {
    let t = Instant::now();
    let r = run_suite(&VerifyConfig { suite: Suite::Static, ..VerifyConfig::default() }).expect("static suite");
    let took = t.elapsed();
    let ids = ["IDS39", "IDS311", "COEFSIMP", "SWAP"];
    let ok = all_exact(&r, &ids) && took < Duration::from_secs(10);
    Line {
        label: "static identities exact, zero residual, < 10 s",
        ok,
        detail: format!(
            "{}; {:.2} s",
            ids.iter().map(|id| status_of(&r, id)).collect::<Vec<_>>().join(", "),
            took.as_secs_f64()
        ),
    }
}

fn criterion_2(all: &Report) -> Line {
    let ok = all_exact(all, &["F-quarter-pi"]);
    let notes = find(all, "F-quarter-pi").map(|c| c.notes.join("; ")).unwrap_or_default();
    Line {
        label: "F(pi/4, 0, 0) = 15 rho/(8b) exactly, 1.875 within 1e-12",
        ok,
        detail: format!("{}; {notes}", status_of(all, "F-quarter-pi")),
    }
}

const REPLAY: [&str; 9] = [
    "L31-closure",
    "E35",
    "E314",
    "E312",
    "E313-315",
    "L33-coeffs",
    "E321",
    "CUBIC-elim",
    "E318-320",
];

fn criterion_3(all: &Report) -> Line {
    let ok = REPLAY.iter().all(|id| find(all, id).is_some_and(replay_ok));
    Line {
        label: "derivation replay passes with zero residual",
        ok,
        detail: REPLAY.iter().map(|id| status_of(all, id)).collect::<Vec<_>>().join(", ") + &first_witness(all, &REPLAY),
    }
}

fn criterion_4(all: &Report) -> Line {
    let c = find(all, "E322-residual");
    let ok = c.is_some_and(replay_ok);
    let residual = c.map(|c| c.residual_terms).unwrap_or(0);
    Line {
        label: "third-order residual vanishes identically",
        ok,
        detail: format!(
            "{} with {residual} residual terms{}; {} (p18 = 0)",
            status_of(all, "E322-residual"),
            first_witness(all, &["E322-residual"]),
            status_of(all, "E322-residual/rederived"),
        ),
    }
}

fn criterion_5(all: &Report) -> Line {
    let ids = ["CUBIC-real", "P23-candidates", "G-nonvanishing", "P16-special"];
    let ok = ids.iter().all(|id| find(all, id).is_some_and(|c| c.status == Status::Pass));
    Line {
        label: "cubic real, p23 non-real, G and p16 non-vanishing on the grid",
        ok,
        detail: ids.iter().map(|id| status_of(all, id)).collect::<Vec<_>>().join(", ")
            + &first_witness(all, &ids)
            + &format!(
                "; {}, {}",
                status_of(all, "P23-candidates/rederived"),
                status_of(all, "G-nonvanishing/rederived")
            ),
    }
}

fn criterion_6(all: &Report) -> Line {
    let props: [(&str, fn() -> Result<(), String>); 6] = [
        ("normalize", || common::normalize_idempotent(1000)),
        ("conjugation", || common::conjugation_involution(1000)),
        ("Leibniz", || common::leibniz(1000)),
        ("chain", || common::chain(1000)),
        ("XY confluence", || common::xy_confluence(300)),
        ("float coherence", || common::float_coherence(1000)),
    ];
    let mut failed = Vec::new();
    for (name, f) in props {
        if let Err(e) = f() {
            failed.push(format!("{name}: {}", e.lines().next().unwrap_or("")));
        }
    }
    let coherence = find(all, "FLOAT-coherence").is_some_and(|c| c.status == Status::Pass);
    if !coherence {
        failed.push(status_of(all, "FLOAT-coherence"));
    }
    Line {
        label: "kernel properties over randomized inputs",
        ok: failed.is_empty(),
        detail: if failed.is_empty() {
            "all properties hold; catalog coherence below 1e-25 relative".into()
        } else {
            failed.join("; ")
        },
    }
}

fn criterion_7(all: &Report) -> Line {
    let ok = find(all, "ODE-order").is_some_and(|c| c.status == Status::Pass);
    let orders = find(all, "ODE-order")
        .and_then(|c| c.notes.iter().find(|n| n.starts_with("orders")).cloned())
        .unwrap_or_default();
    Line {
        label: "RK4 order within [3.7, 4.3]",
        ok,
        detail: format!("{}; {orders}", status_of(all, "ODE-order")),
    }
}

fn full_suite(all: &Report, took: Duration) -> Line {
    let missing: Vec<_> = registry().into_iter().filter(|c| find(all, c.id).is_none()).map(|c| c.id).collect();
    let ok = took < Duration::from_secs(600) && missing.is_empty() && !all.overflow_without_fallback;
    Line {
        label: "full suite < 10 min",
        ok,
        detail: format!(
            "{:.1} s, {} results, {} overflowed{}",
            took.as_secs_f64(),
            all.results.len(),
            all.summary.overflowed,
            if missing.is_empty() { String::new() } else { format!(", missing {}", missing.join(" ")) }
        ),
    }
}

fn main() {
    let t = Instant::now();
    let all = run_suite(&VerifyConfig { suite: Suite::All, mode: Mode::Symbolic, ..VerifyConfig::default() })
        .expect("full suite");
    let took = t.elapsed();
    let lines = [
        ("1", criterion_1()),
        ("2", criterion_2(&all)),
        ("3", criterion_3(&all)),
        ("4", criterion_4(&all)),
        ("5", criterion_5(&all)),
        ("6", criterion_6(&all)),
        ("7", criterion_7(&all)),
        ("S", full_suite(&all, took)),
    ];
    let mut failed = 0;
    for (n, l) in &lines {
        println!("{} [{n}] {}: {}", if l.ok { "PASS" } else { "FAIL" }, l.label, l.detail);
        failed += usize::from(!l.ok);
    }
    println!("{} of {} criteria pass", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
