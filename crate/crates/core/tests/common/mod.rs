//! Properties shared by the property-test targets and the acceptance target.
//!
//! Each property runs a deterministic proptest runner and returns the first
//! counterexample as an error string.

#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use pmc_verify::catalog::{self, Catalog};
use pmc_verify::domain::Symbolic;
use pmc_verify::jet::{JetCtx, JetMono, Level, Strategy as RewriteStrategy, Sym};
use pmc_verify::kernel::{eval_exact, sample_point, Coeff, DiffVar, GaussianRational, TrigRational};
use pmc_verify::lang::{lower, parse, parse_expr, render};
use pmc_verify::numeric::{eval_complex, solve_cubic, ComplexF, NumConfig, NumPoint};
use pmc_verify::EngineError;

pub fn run<S: Strategy>(
    cases: u32,
    strat: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let cfg = Config {
        cases,
        failure_persistence: None,
        max_global_rejects: cases * 20,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(cfg, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strat, test).map_err(|e| e.to_string())
}

fn var() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("a".to_string()),
        Just("abar".to_string()),
        Just("rho".to_string()),
        Just("b".to_string()),
        Just("sin(alpha)".to_string()),
        Just("cos(alpha)".to_string()),
    ]
}

/// A sum of up to six monomials with small Gaussian rational coefficients.
fn poly_text() -> impl Strategy<Value = String> {
    let coeff = (-9i32..=9, 1i32..=5, -3i32..=3).prop_map(|(n, d, im)| format!("({n}/{d} + {im}*i)"));
    let mono = (coeff, prop::collection::vec((var(), 1u32..4), 0..4)).prop_map(|(c, vs)| {
        let mut t = c;
        for (v, e) in vs {
            t.push_str(&format!("*{v}^{e}"));
        }
        t
    });
    prop::collection::vec(mono, 1..7).prop_map(|ts| format!("({})", ts.join(" + ")))
}

fn atom() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => poly_text(),
        1 => Just("a".to_string()),
        1 => Just("abar".to_string()),
        1 => Just("rho".to_string()),
        1 => Just("b".to_string()),
        1 => Just("sin(alpha)".to_string()),
        1 => Just("cos(alpha)".to_string()),
        1 => Just("i".to_string()),
        1 => (-5i32..=5, 1i32..=4).prop_map(|(n, d)| format!("({n}/{d})")),
    ]
}

/// Denominators that never vanish identically.
fn safe_den() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("a + b".to_string()),
        Just("abar + b".to_string()),
        Just("sin(alpha)".to_string()),
        Just("rho".to_string()),
        Just("-2 + 3*sin(alpha)^2".to_string()),
        Just("a*abar + rho".to_string()),
    ]
}

/// Random expressions in the input syntax, polynomial when `div` is false.
pub fn expr_text(div: bool) -> BoxedStrategy<String> {
    atom()
        .prop_recursive(4, 24, 2, move |inner| {
            let mut arms = vec![
                (inner.clone(), inner.clone()).prop_map(|(x, y)| format!("({x} + {y})")).boxed(),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| format!("({x} - {y})")).boxed(),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| format!("({x})*({y})")).boxed(),
                (inner.clone(), 0u32..3).prop_map(|(x, k)| format!("({x})^{k}")).boxed(),
                inner.clone().prop_map(|x| format!("conj({x})")).boxed(),
            ];
            if div {
                arms.push((inner.clone(), safe_den()).prop_map(|(x, d)| format!("({x})/({d})")).boxed());
                arms.push((inner.clone(), 1i32..3).prop_map(|(x, k)| format!("cot(alpha)^{k}*({x})")).boxed());
            }
            proptest::strategy::Union::new(arms)
        })
        .boxed()
}

pub fn expr(div: bool) -> impl Strategy<Value = TrigRational> {
    expr_text(div).prop_map(|t| parse_expr(&t).unwrap_or_else(|e| panic!("generated `{t}`: {e}")))
}

fn diff_var() -> impl Strategy<Value = DiffVar> {
    prop_oneof![Just(DiffVar::Alpha), Just(DiffVar::A), Just(DiffVar::Abar)]
}

fn eq(x: &TrigRational, y: &TrigRational) -> Result<bool, TestCaseError> {
    x.equals(y).map_err(|e| TestCaseError::fail(e.to_string()))
}

fn ok<T>(r: pmc_verify::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

pub fn normalize_idempotent(cases: u32) -> Result<(), String> {
    run(cases, expr(true), |e| {
        let n = ok(e.normalize())?;
        let nn = ok(n.normalize())?;
        prop_assert!(nn.structural_eq(&n), "normalize not idempotent on {}", render(&e));
        prop_assert!(eq(&e, &n)?, "normalize changed the value of {}", render(&e));
        Ok(())
    })
}

pub fn conjugation_involution(cases: u32) -> Result<(), String> {
    run(cases, (expr(true), expr(true)), |(x, y)| {
        prop_assert!(x.conjugate().conjugate().structural_eq(&x), "conj conj != id on {}", render(&x));
        let xy = ok(x.mul(&y))?;
        prop_assert!(eq(&xy.conjugate(), &ok(x.conjugate().mul(&y.conjugate()))?)?);
        let lhs = ok(x.differentiate(DiffVar::A))?.conjugate();
        let rhs = ok(x.conjugate().differentiate(DiffVar::Abar))?;
        prop_assert!(eq(&lhs, &rhs)?, "conj d/da != d/dabar conj on {}", render(&x));
        Ok(())
    })
}

pub fn leibniz(cases: u32) -> Result<(), String> {
    run(cases, (expr(true), expr(true), diff_var()), |(x, y, v)| {
        let lhs = ok(ok(x.mul(&y))?.differentiate(v))?;
        let rhs = ok(ok(x.differentiate(v))?.mul(&y))?;
        let rhs = ok(rhs.add(&ok(x.mul(&ok(y.differentiate(v))?))?))?;
        prop_assert!(eq(&lhs, &rhs)?, "Leibniz fails for d/d{} on {} and {}", v.name(), render(&x), render(&y));
        Ok(())
    })
}

/// Power and quotient chain rules.
pub fn chain(cases: u32) -> Result<(), String> {
    run(cases, (expr(true), diff_var(), 1i32..4), |(x, v, n)| {
        let dx = ok(x.differentiate(v))?;
        let lhs = ok(ok(x.pow(n))?.differentiate(v))?;
        let rhs = ok(ok(x.pow(n - 1))?.mul(&dx))?.scale(&GaussianRational::from_int(n as i64));
        prop_assert!(eq(&lhs, &rhs)?, "power rule fails for n={n} on {}", render(&x));
        if !x.is_zero() {
            let lhs = ok(ok(x.inv())?.differentiate(v))?;
            let rhs = ok(dx.neg().div(&ok(x.pow(2))?))?;
            prop_assert!(eq(&lhs, &rhs)?, "quotient rule fails on {}", render(&x));
        }
        Ok(())
    })
}

/// Exact evaluation is a ring homomorphism that commutes with conjugation.
pub fn evaluation_homomorphism(cases: u32) -> Result<(), String> {
    run(cases, (expr(true), expr(true), 0u64..10_000), |(x, y, seed)| {
        let pt = sample_point(seed);
        let ev = |e: &TrigRational| eval_exact(e, &pt);
        let (Ok(vx), Ok(vy)) = (ev(&x), ev(&y)) else {
            return Err(TestCaseError::reject("pole"));
        };
        prop_assert_eq!(ok(ev(&ok(x.add(&y))?))?, Coeff::add(&vx, &vy));
        prop_assert_eq!(ok(ev(&ok(x.mul(&y))?))?, Coeff::mul(&vx, &vy));
        prop_assert_eq!(ok(ev(&x.conjugate()))?, vx.conj());
        let z = ok(x.sub(&ok(x.normalize())?))?;
        prop_assert!(Coeff::is_zero(&ok(ev(&z))?));
        Ok(())
    })
}

/// Round trip through render, parse and lower.
pub fn render_round_trip(cases: u32) -> Result<(), String> {
    run(cases, expr(true), |e| {
        let text = render(&e);
        let back = ok(parse(&text).and_then(|a| lower(&a)))?;
        prop_assert!(eq(&back, &e)?, "round trip changed {text}");
        Ok(())
    })
}

pub fn catalog_round_trip() -> Result<(), String> {
    let cat = shared_catalog();
    for (id, _) in catalog::ENTRIES {
        let e = cat.get(id).map_err(|e| e.to_string())?;
        let back = parse_expr(&render(e)).map_err(|e| format!("{id}: {e}"))?;
        if !back.equals(e).map_err(|e| e.to_string())? {
            return Err(format!("{id} does not survive render/parse"));
        }
    }
    Ok(())
}

/// Every input parses or fails with a positioned syntax error inside the input.
pub fn parser_total(cases: u32) -> Result<(), String> {
    let soup = prop::collection::vec(
        prop_oneof![
            Just("a"), Just("abar"), Just("b"), Just("rho"), Just("alpha"), Just("sin"), Just("cos"),
            Just("cot"), Just("conj"), Just("i"), Just("("), Just(")"), Just("+"), Just("-"), Just("*"),
            Just("/"), Just("^"), Just("2"), Just("1/3"), Just("0.5"), Just(" "), Just("ā"), Just("é"),
            Just("!"), Just("^-1"), Just("sin("),
        ],
        0..24,
    )
    .prop_map(|v| v.concat());
    let bytes = prop::collection::vec(any::<u8>(), 0..40).prop_map(|b| String::from_utf8_lossy(&b).into_owned());
    run(cases, prop_oneof![soup, bytes], |text| {
        match parse_expr(&text) {
            Ok(_) => {}
            Err(EngineError::Syntax { offset, expected }) => {
                prop_assert!(offset <= text.len(), "offset {offset} past end of {text:?}");
                prop_assert!(!expected.is_empty());
            }
            Err(e) if e.is_pole() || e.is_overflow() || matches!(e, EngineError::Domain(_)) => {}
            Err(e) => return Err(TestCaseError::fail(format!("{text:?}: unexpected {e}"))),
        }
        Ok(())
    })
}

pub fn shared_catalog() -> &'static Catalog<Symbolic> {
    static CAT: OnceLock<Catalog<Symbolic>> = OnceLock::new();
    CAT.get_or_init(|| catalog::symbolic().expect("catalog"))
}

static SYMBOLIC: Symbolic = Symbolic;

pub fn jet_ctx() -> JetCtx<'static, Symbolic> {
    JetCtx::new(&SYMBOLIC, shared_catalog()).expect("jet context")
}

/// Mixed monomials in the jet symbols with random small exponents.
fn jet_mono() -> impl Strategy<Value = Vec<(Sym, u32)>> {
    (1u32..4, 1u32..4, 0u32..2, 0u32..2, 0u32..2, 0u32..2).prop_map(|(x, y, w, wb, c, cb)| {
        vec![(Sym::X, x), (Sym::Y, y), (Sym::W, w), (Sym::Wbar, wb), (Sym::C, c), (Sym::Cbar, cb)]
    })
}

/// Pairwise and batched XY rewriting give the same normal form.
pub fn xy_confluence(cases: u32) -> Result<(), String> {
    let j = jet_ctx();
    run(cases, (jet_mono(), jet_mono(), var()), |(m1, m2, k)| {
        let k = parse_expr(&k).expect("variable");
        let mono = |s: &[(Sym, u32)]| {
            let mut m = JetMono::ONE;
            for (sym, e) in s {
                m = m.with(*sym, *e);
            }
            m
        };
        let p = ok(j.add(&j.monomial(mono(&m1), k.clone()), &j.monomial(mono(&m2), TrigRational::one())))?;
        let a = ok(j.reduce_with(&p, Level::Closed, RewriteStrategy::Pairwise))?;
        let b = ok(j.reduce_with(&p, Level::Closed, RewriteStrategy::Batched))?;
        let d = ok(j.sub(&a, &b))?;
        prop_assert!(j.vanishes(&d), "rewrite orders disagree on {:?} {:?}", m1, m2);
        prop_assert!(a.terms().all(|(m, _)| m.exp(Sym::X) == 0 || m.exp(Sym::Y) == 0), "XY left after reduction");
        Ok(())
    })
}

/// d_beta_ik(conj e) = -conj(d_beta_ik e) on base expressions.
pub fn d_beta_conjugation(cases: u32) -> Result<(), String> {
    let j = jet_ctx();
    run(cases, expr(true), |e| {
        let x = j.constant(e.clone());
        let lhs = ok(j.d_beta_ik(&ok(j.conj(&x))?, Level::Closed))?;
        let rhs = j.neg(&ok(j.conj(&ok(j.d_beta_ik(&x, Level::Closed))?))?);
        prop_assert!(j.vanishes(&ok(j.sub(&lhs, &rhs))?), "coherence fails on {}", render(&e));
        Ok(())
    })
}

const P: usize = 128;

/// Exact evaluation and 128-bit float evaluation agree to 1e-25 relative.
pub fn float_coherence(cases: u32) -> Result<(), String> {
    let cfg = NumConfig::for_precision(P);
    run(cases, (expr(true), 0u64..100_000), move |(e, seed)| {
        let pt = sample_point(seed);
        let Ok(exact) = eval_exact(&e, &pt) else {
            return Err(TestCaseError::reject("pole"));
        };
        let float = ok(eval_complex(&e, &NumPoint::from_sample(&pt, P), &cfg))?;
        let err = float.rel_err_f64(&ComplexF::from_gaussian(&exact, P));
        prop_assert!(err < 1e-25, "relative error {err:e} on {} at seed {seed}", render(&e));
        Ok(())
    })
}

fn complex() -> impl Strategy<Value = ComplexF> {
    (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(re, im)| ComplexF::from_f64(re, im, P).unwrap())
}

fn real() -> impl Strategy<Value = ComplexF> {
    (-10.0f64..10.0).prop_map(|re| ComplexF::from_f64(re, 0.0, P).unwrap())
}

fn lead(c: ComplexF) -> ComplexF {
    if c.abs_f64() < 1e-3 {
        ComplexF::from_int(1, P)
    } else {
        c
    }
}

/// Relative backward error of every root stays below 1e-25.
pub fn cubic_residual(cases: u32) -> Result<(), String> {
    let cfg = NumConfig::for_precision(P);
    run(cases, (complex(), complex(), complex(), complex()), move |(c3, c2, c1, c0)| {
        let c3 = lead(c3);
        let r = ok(solve_cubic(&c3, &c2, &c1, &c0, &cfg))?;
        prop_assert!(r.max_residual() < 1e-25, "residual {:e}", r.max_residual());
        // Vieta: the roots sum to -c2/c3.
        let sum = r.roots[0].add(&r.roots[1]).add(&r.roots[2]);
        let want = ok(c2.neg().div(&c3))?;
        prop_assert!(sum.dist_f64(&want) < 1e-20 * (1.0 + want.abs_f64()), "Vieta fails");
        Ok(())
    })
}

/// Real cubics have conjugate-closed root sets.
pub fn real_cubic_conjugate_closed(cases: u32) -> Result<(), String> {
    let cfg = NumConfig::for_precision(P);
    run(cases, (real(), real(), real(), real()), move |(c3, c2, c1, c0)| {
        let c3 = lead(c3);
        let r = ok(solve_cubic(&c3, &c2, &c1, &c0, &cfg))?;
        prop_assert!(r.conjugate_closed(cfg.tol_conj), "roots not closed under conjugation");
        Ok(())
    })
}

/// Roots of (X-r1)(X-r2)(X-r3) are recovered when well separated.
pub fn cubic_recovers_roots(cases: u32) -> Result<(), String> {
    let cfg = NumConfig::for_precision(P);
    run(cases, (complex(), complex(), complex()), move |(r1, r2, r3)| {
        let gap = r1.dist_f64(&r2).min(r1.dist_f64(&r3)).min(r2.dist_f64(&r3));
        if gap < 1e-2 {
            return Err(TestCaseError::reject("clustered"));
        }
        let one = ComplexF::from_int(1, P);
        let c2 = r1.add(&r2).add(&r3).neg();
        let c1 = r1.mul(&r2).add(&r1.mul(&r3)).add(&r2.mul(&r3));
        let c0 = r1.mul(&r2).mul(&r3).neg();
        let got = ok(solve_cubic(&one, &c2, &c1, &c0, &cfg))?;
        for want in [&r1, &r2, &r3] {
            let best = got.roots.iter().map(|z| z.dist_f64(want)).fold(f64::INFINITY, f64::min);
            prop_assert!(best < 1e-25 * (1.0 + want.abs_f64()) / gap.min(1.0), "root lost: {best:e}");
        }
        Ok(())
    })
}
