//! Replay of the derivation steps as zero-residual checks.
//!
//! Every check is generic over the [`Domain`]: in the symbolic domain a
//! residual is zero iff it is identically zero, in a series domain iff it
//! vanishes at the anchor point.

use crate::catalog::{Catalog, ENTRIES};
use crate::domain::Domain;
use crate::error::{EngineError, Result};
use crate::kernel::{DiffVar, Var};

use super::{JetCtx, JetMono, JetPoly, Level, Sym};

/// Catalogs of both orientations plus jet operations, in one domain.
pub struct Env<'c, D: Domain> {
    pub d: &'c D,
    pub cat: &'c Catalog<D>,
    pub mirror: &'c Catalog<D>,
    pub j: JetCtx<'c, D>,
}

impl<'c, D: Domain> Env<'c, D> {
    pub fn new(d: &'c D, cat: &'c Catalog<D>, mirror: &'c Catalog<D>) -> Result<Self> {
        Ok(Env {
            d,
            cat,
            mirror,
            j: JetCtx::new(d, cat)?,
        })
    }

    fn p(&self, id: &str) -> Result<D::Elem> {
        self.cat.get(id).cloned()
    }

    fn pb(&self, id: &str) -> Result<D::Elem> {
        self.cat.bar(self.d, id)
    }

    fn dp(&self, id: &str, v: &[DiffVar]) -> Result<D::Elem> {
        self.cat.d(self.d, id, v)
    }

    fn k(&self, e: D::Elem) -> JetPoly<D::Elem> {
        self.j.constant(e)
    }

    fn mono(&self, s: &[(Sym, u32)], e: D::Elem) -> JetPoly<D::Elem> {
        let mut m = JetMono::ONE;
        for (sym, k) in s {
            m = m.with(*sym, *k);
        }
        self.j.monomial(m, e)
    }

    fn sum(&self, parts: &[JetPoly<D::Elem>]) -> Result<JetPoly<D::Elem>> {
        let mut acc = self.j.zero();
        for p in parts {
            acc = self.j.add(&acc, p)?;
        }
        Ok(acc)
    }
}

/// What a check produced.
pub struct Evidence<E> {
    /// Named residuals; the check passes iff all vanish.
    pub residuals: Vec<(String, JetPoly<E>)>,
    /// Facts recorded along the way; identical across points when the check is sound.
    pub notes: Vec<String>,
    /// Sign σ chosen where the claim is "= 0" and the orientation is a convention.
    pub sign: Option<i32>,
    /// Additional results reported under `<id>/<suffix>`.
    pub variants: Vec<(String, Vec<(String, JetPoly<E>)>)>,
}

impl<E> Evidence<E> {
    fn new(residuals: Vec<(String, JetPoly<E>)>) -> Self {
        Evidence {
            residuals,
            notes: Vec::new(),
            sign: None,
            variants: Vec::new(),
        }
    }
}

/// The checks, with a short description each.
pub const STATIC_CHECKS: &[(&str, &str)] = &[
    ("IDS39", "p1 - conj(p1) = 0, d p3/d abar = 0, conj(d p2/d a) = 2 p3"),
    ("IDS311", "conj(d p2/d abar) = 2 d p7/d a, p8 = conj(p8)"),
    ("COEFSIMP", "coefficient of a_alpha in |c_alpha|^2 - |a_alpha|^2 is -3 rho sin cos/(4(a+b))"),
    ("SWAP", "conj(p_i) equals the entry built with a and abar exchanged"),
];

pub const JET_CHECKS: &[(&str, &str)] = &[
    ("L31-closure", "conj(c) c_alpha - a abar_alpha = p4 from the two derivatives of |c|^2"),
    ("E35", "conj(c) c_beta - a abar_beta = (i/k) p5"),
    ("E314", "ik a_beta_alpha from the alpha-derivative of a_alpha - ik a_beta = p2"),
    ("E312", "alpha-derivative of |a_alpha|^2 = p7 a_alpha + conj(p7 a_alpha) + p8"),
    ("E313-315", "beta-derivative of the same relation and the sum with the alpha-derivative"),
    ("L33-coeffs", "a_alpha_alpha = p11 a_alpha^2 + p12 a_alpha + (1/2) d p2/d abar conj(a_alpha) + p13"),
    ("E321", "ik a_beta_alpha = p11 a_alpha^2 + p14 a_alpha - (1/2) d p2/d abar conj(a_alpha) + p15"),
    ("E322-residual", "third-order compatibility p16 a_alpha^2 + p17 a_alpha + p18 conj(a_alpha) + p19 = 0"),
    ("CUBIC-elim", "cubic p16 X^3 + p20 X^2 + p21 X + p22 after eliminating conj(a_alpha)"),
    ("E318-320", "branch conj(a_alpha) = p7: the two mixed derivatives differ by F"),
];

pub fn anchor(id: &str) -> Option<&'static str> {
    let base = id.split('/').next().unwrap_or(id);
    STATIC_CHECKS
        .iter()
        .chain(JET_CHECKS)
        .find(|(k, _)| *k == base)
        .map(|(_, a)| *a)
}

pub fn run<D: Domain>(id: &str, env: &Env<D>) -> Result<Evidence<D::Elem>> {
    match id {
        "IDS39" => ids39(env),
        "IDS311" => ids311(env),
        "COEFSIMP" => coefsimp(env),
        "SWAP" => swap(env),
        "L31-closure" => l31_closure(env),
        "E35" => e35(env),
        "E314" => e314(env),
        "E312" => e312(env),
        "E313-315" => e313_315(env),
        "L33-coeffs" => l33_coeffs(env),
        "E321" => e321(env),
        "E322-residual" => e322(env),
        "CUBIC-elim" => cubic_elim(env),
        "E318-320" => e318_320(env),
        other => Err(EngineError::UnknownId(other.to_string())),
    }
}

fn named<E>(name: &str, p: JetPoly<E>) -> (String, JetPoly<E>) {
    (name.to_string(), p)
}

fn ids39<D: Domain>(e: &Env<D>) -> Result<Evidence<D::Elem>> {
    let d = e.d;
    let r1 = d.sub(&e.p("p1")?, e.mirror.get("p1")?)?;
    let r2 = e.dp("p3", &[DiffVar::Abar])?;
    let r3 = d.sub(&d.conj(&e.dp("p2", &[DiffVar::A])?)?, &d.scale(&e.p("p3")?, 2, 1)?)?;
    Ok(Evidence::new(vec![
        named("p1 - pbar(p1)", e.k(r1)),
        named("d p3/d abar", e.k(r2)),
        named("conj(d p2/d a) - 2 p3", e.k(r3)),
    ]))
}

fn ids311<D: Domain>(e: &Env<D>) -> Result<Evidence<D::Elem>> {
    let d = e.d;
    let r1 = d.sub(
        &d.conj(&e.dp("p2", &[DiffVar::Abar])?)?,
        &d.scale(&e.dp("p7", &[DiffVar::A])?, 2, 1)?,
    )?;
    let r2 = d.sub(&e.p("p8")?, e.mirror.get("p8")?)?;
    Ok(Evidence::new(vec![
        named("conj(d p2/d abar) - 2 d p7/d a", e.k(r1)),
        named("p8 - pbar(p8)", e.k(r2)),
    ]))
}

fn coefsimp<D: Domain>(e: &Env<D>) -> Result<Evidence<D::Elem>> {
    let d = e.d;
    let a = d.var(Var::A);
    let ab = d.var(Var::Abar);
    let lhs = d.add(
        &d.sub(
            &d.mul(&d.scale(&a, 1, 2)?, &d.conj(&e.dp("p2", &[DiffVar::Abar])?)?)?,
            &d.mul(&e.p("kappa")?, &e.dp("p3", &[DiffVar::A])?)?,
        )?,
        &e.dp("p4", &[DiffVar::A])?,
    )?;
    let mid = d.add(&d.scale(e.mirror.get("p2")?, -1, 2)?, &d.mul(&ab, &e.p("p3")?)?)?;
    let rho = d.var(Var::Rho);
    let sc = d.mul(&d.var(Var::S), &d.var(Var::C))?;
    let four_apb = d.scale(&d.add(&a, &d.var(Var::B))?, 4, 1)?;
    let rhs = d.neg(&d.div(&d.scale(&d.mul(&rho, &sc)?, 3, 1)?, &four_apb)?);
    Ok(Evidence::new(vec![
        named("first step", e.k(d.sub(&lhs, &mid)?)),
        named("second step", e.k(d.sub(&mid, &rhs)?)),
    ]))
}

fn swap<D: Domain>(e: &Env<D>) -> Result<Evidence<D::Elem>> {
    let mut out = Vec::new();
    for (id, _) in ENTRIES {
        let r = e.d.sub(&e.pb(id)?, e.mirror.get(id)?)?;
        out.push(named(&format!("conj({id}) - pbar({id})"), e.k(r)));
    }
    Ok(Evidence::new(out))
}

fn l31_closure<D: Domain>(e: &Env<D>) -> Result<Evidence<D::Elem>> {
    let (d, j) = (e.d, &e.j);
    // Q = C·Cbar − |c|² as a relation; both derivatives vanish.
    let q = j.sub(
        &e.mono(&[(Sym::C, 1), (Sym::Cbar, 1)], d.one()),
        &e.k(e.p("kappa")?),
    )?;
    let e1 = j.d_beta_ik(&q, Level::Base)?;
    let e2 = j.d_alpha_total(&q, false, Level::Base)?;
    let half = j.scale(&j.sub(&e2, &e1)?, &d.ratio(1, 2))?;
    let target = e.sum(&[
        e.mono(&[(Sym::Cbar, 1), (Sym::W, 1)], d.one()),
        e.mono(&[(Sym::Y, 1)], d.neg(&d.var(Var::A))),
        e.k(d.neg(&e.p("p4")?)),
    ])?;
    let r = j.reduce(&j.sub(&half, &target)?, Level::Base)?;
    Ok(Evidence::new(vec![named("(E2 - E1)/2 - (Cbar W - a Y - p4)", r)]))
}

fn e35<D: Domain>(e: &Env<D>) -> Result<Evidence<D::Elem>> {
    let (d, j) = (e.d, &e.j);
    let ik_c = j.d_beta_ik(&j.sym(Sym::C), Level::FirstOrder)?;
    let ik_abar = j.d_beta_ik(&e.k(d.var(Var::Abar)), Level::FirstOrder)?;
    let lhs = j.sub(
        &j.mul(&j.sym(Sym::Cbar), &ik_c)?,
        &j.scale(&ik_abar, &d.var(Var::A))?,
    )?;
    let r = j.reduce(&j.add(&lhs, &e.k(e.p("p5")?))?, Level::FirstOrder)?;
    Ok(Evidence::new(vec![named("Cbar ik c_beta - a ik abar_beta + p5", r)]))
}

fn e314<D: Domain>(e: &Env<D>) -> Result<Evidence<D::Elem>> {
    let j = &e.j;
    let ik_a = j.d_beta_ik(&e.k(e.d.var(Var::A)), Level::FirstOrder)?;
    let lhs = j.d_alpha_total(&ik_a, true, Level::FirstOrder)?;
    let r = j.sub(&lhs, j.ikab_first())?;
    Ok(Evidence::new(vec![named("d_alpha(ik a_beta) + p1 ik a_beta - display", r)]))
}

/// X·Y − p7 X − p̄7 Y − p8.
fn xy_relation<D: Domain>(e: &Env<D>) -> Result<JetPoly<D::Elem>> {
    e.j.sub(&e.mono(&[(Sym::X, 1), (Sym::Y, 1)], e.d.one()), e.j.xy_rhs())
}

/// X2 (Y − p7) ± Y2 (X − p̄7).
fn second_order_lhs<D: Domain>(e: &Env<D>, plus: bool) -> Result<JetPoly<D::Elem>> {
    let (d, j) = (e.d, &e.j);
    let t1 = j.mul(&j.sym(Sym::X2), &j.lin(&[(Sym::Y, d.one())], d.neg(&e.p("p7")?)))?;
    let t2 = j.mul(&j.sym(Sym::Y2), &j.lin(&[(Sym::X, d.one())], d.neg(&e.pb("p7")?)))?;
    if plus {
        j.add(&t1, &t2)
    } else {
        j.sub(&t1, &t2)
    }
}

/// The α-side: Q_a with X2(Y − p7) + Y2(X − p̄7) ≡ Q_a.
fn q_alpha<D: Domain>(e: &Env<D>) -> Result<JetPoly<D::Elem>> {
    let j = &e.j;
    let de = j.d_alpha_total(&xy_relation(e)?, false, Level::Closed)?;
    j.reduce(&j.sub(&second_order_lhs(e, true)?, &de)?, Level::Closed)
}

/// The β-side: Q_b with X2(Y − p7) − Y2(X − p̄7) ≡ Q_b.
fn q_beta<D: Domain>(e: &Env<D>) -> Result<JetPoly<D::Elem>> {
    let j = &e.j;
    let de = j.d_beta_ik(&xy_relation(e)?, Level::Closed)?;
    j.reduce(&j.sub(&second_order_lhs(e, false)?, &de)?, Level::Closed)
}

/// ∂a p7 X² + conj(∂a p7) Y² + p9a X + p̄9a Y + p10a.
fn e312_display<D: Domain>(e: &Env<D>, p9a: &D::Elem, p10a: &D::Elem) -> Result<JetPoly<D::Elem>> {
    let d = e.d;
    let da_p7 = e.dp("p7", &[DiffVar::A])?;
    e.sum(&[
        e.mono(&[(Sym::X, 2)], da_p7.clone()),
        e.mono(&[(Sym::Y, 2)], d.conj(&da_p7)?),
        e.j.lin(&[(Sym::X, p9a.clone()), (Sym::Y, d.conj(p9a)?)], p10a.clone()),
    ])
}

/// −(conj(∂ā p2) − ∂a p7) X² + (∂ā p2 − conj(∂a p7)) Y² + p9b X − p̄9b Y + p10b.
fn e313_display<D: Domain>(e: &Env<D>, p9b: &D::Elem, p10b: &D::Elem) -> Result<JetPoly<D::Elem>> {
    let d = e.d;
    let da_p7 = e.dp("p7", &[DiffVar::A])?;
    let dab_p2 = e.dp("p2", &[DiffVar::Abar])?;
    e.sum(&[
        e.mono(&[(Sym::X, 2)], d.neg(&d.sub(&d.conj(&dab_p2)?, &da_p7)?)),
        e.mono(&[(Sym::Y, 2)], d.sub(&dab_p2, &d.conj(&da_p7)?)?),
        e.j.lin(&[(Sym::X, p9b.clone()), (Sym::Y, d.neg(&d.conj(p9b)?))], p10b.clone()),
    ])
}

/// ∂ā p2 Y² + (p9a + p9b) X + (p̄9a − p̄9b) Y + p10a + p10b.
fn e315_display<D: Domain>(
    e: &Env<D>,
    p9a: &D::Elem,
    p9b: &D::Elem,
    p10a: &D::Elem,
    p10b: &D::Elem,
) -> Result<JetPoly<D::Elem>> {
    let d = e.d;
    e.j.add(
        &e.mono(&[(Sym::Y, 2)], e.dp("p2", &[DiffVar::Abar])?),
        &e.j.lin(
            &[
                (Sym::X, d.add(p9a, p9b)?),
                (Sym::Y, d.sub(&d.conj(p9a)?, &d.conj(p9b)?)?),
            ],
            d.add(p10a, p10b)?,
        ),
    )
}

fn same<D: Domain>(e: &Env<D>, x: &D::Elem, y: &D::Elem) -> Result<bool> {
    Ok(e.d.value_is_zero(&e.d.sub(x, y)?))
}

fn e312<D: Domain>(e: &Env<D>) -> Result<Evidence<D::Elem>> {
    let j = &e.j;
    let q = q_alpha(e)?;
    let (p9a, p10a) = (e.p("p9a")?, e.p("p10a")?);
    let r = j.sub(&q, &e312_display(e, &p9a, &p10a)?)?;
    let d9 = j.coeff_or_zero(&q, JetMono::sym(Sym::X));
    let d10 = j.coeff_or_zero(&q, JetMono::ONE);
    let mut ev = Evidence::new(vec![named("derived - display", r)]);
    ev.notes.push(format!("re-derived p9a matches printed: {}", same(e, &d9, &p9a)?));
    ev.notes.push(format!("re-derived p10a matches printed: {}", same(e, &d10, &p10a)?));
    if !(same(e, &d9, &p9a)? && same(e, &d10, &p10a)?) {
        let rr = j.sub(&q, &e312_display(e, &d9, &d10)?)?;
        ev.variants.push(("rederived".into(), vec![named("derived - display(rederived)", rr)]));
    }
    Ok(ev)
}

fn e313_315<D: Domain>(e: &Env<D>) -> Result<Evidence<D::Elem>> {
    let j = &e.j;
    let qa = q_alpha(e)?;
    let qb = q_beta(e)?;
    let (p9a, p9b, p10a, p10b) = (e.p("p9a")?, e.p("p9b")?, e.p("p10a")?, e.p("p10b")?);
    let r13 = j.sub(&qb, &e313_display(e, &p9b, &p10b)?)?;
    // Adding the two sides: 2 X2 (Y − p7) ≡ Q_a + Q_b.
    let r15 = j.sub(&j.add(&qa, &qb)?, &e315_display(e, &p9a, &p9b, &p10a, &p10b)?)?;
    let d9b = j.coeff_or_zero(&qb, JetMono::sym(Sym::X));
    let d10b = j.coeff_or_zero(&qb, JetMono::ONE);
    let mut ev = Evidence::new(vec![named("beta side - display", r13), named("sum - display", r15)]);
    let ok9 = same(e, &d9b, &p9b)?;
    let ok10 = same(e, &d10b, &p10b)?;
    ev.notes.push(format!("re-derived p9b matches printed: {ok9}"));
    ev.notes.push(format!("re-derived p10b matches printed: {ok10}"));
    if !(ok9 && ok10) {
        let d9a = j.coeff_or_zero(&qa, JetMono::sym(Sym::X));
        let d10a = j.coeff_or_zero(&qa, JetMono::ONE);
        let rr13 = j.sub(&qb, &e313_display(e, &d9b, &d10b)?)?;
        let rr15 = j.sub(&j.add(&qa, &qb)?, &e315_display(e, &d9a, &d9b, &d10a, &d10b)?)?;
        ev.variants.push((
            "rederived".into(),
            vec![named("beta side - display(rederived)", rr13), named("sum - display(rederived)", rr15)],
        ));
    }
    Ok(ev)
}

fn l33_coeffs<D: Domain>(e: &Env<D>) -> Result<Evidence<D::Elem>> {
    let (d, j) = (e.d, &e.j);
    let rhs = e315_display(e, &e.p("p9a")?, &e.p("p9b")?, &e.p("p10a")?, &e.p("p10b")?)?;
    let x_minus = j.lin(&[(Sym::X, d.one())], d.neg(&e.pb("p7")?));
    let lhs = j.reduce(&j.mul(&x_minus, &rhs)?, Level::Closed)?;
    let n7 = d.add(&d.mul(&e.p("p7")?, &e.pb("p7")?)?, &e.p("p8")?)?;
    let r = j.sub(&lhs, &j.scale(j.x2_rhs(), &d.scale(&n7, 2, 1)?)?)?;
    Ok(Evidence::new(vec![named("(X - conj p7) * sum - 2(|p7|^2+p8) * a_alpha_alpha", r)]))
}

fn e321<D: Domain>(e: &Env<D>) -> Result<Evidence<D::Elem>> {
    let (d, j) = (e.d, &e.j);
    let p1 = e.p("p1")?;
    let p2 = e.p("p2")?;
    let r14 = d.sub(
        &e.p("p14")?,
        &d.add(&d.sub(&p1, &e.dp("p2", &[DiffVar::A])?)?, &e.p("p12")?)?,
    )?;
    let r15 = d.sub(
        &e.p("p15")?,
        &d.sub(
            &d.sub(&e.p("p13")?, &d.mul(&p1, &p2)?)?,
            &e.dp("p2", &[DiffVar::Alpha])?,
        )?,
    )?;
    let rj = j.sub(&j.reduce(j.ikab_first(), Level::SecondOrder)?, j.ikab_second())?;
    Ok(Evidence::new(vec![
        named("p14 - (p1 - d p2/d a + p12)", e.k(r14)),
        named("p15 - (-p1 p2 - d p2/d alpha + p13)", e.k(r15)),
        named("substituted first form - second form", rj),
    ]))
}

/// p16 X² + p17 X + p18 Y + p19.
fn third_order_poly<D: Domain>(e: &Env<D>, suffix: &str) -> Result<JetPoly<D::Elem>> {
    let g = |n: u32| e.p(&format!("p{n}{suffix}"));
    Ok(e.j.add(
        &e.mono(&[(Sym::X, 2)], g(16)?),
        &e.j.lin(&[(Sym::X, g(17)?), (Sym::Y, g(18)?)], g(19)?),
    )?)
}

fn e322<D: Domain>(e: &Env<D>) -> Result<Evidence<D::Elem>> {
    let (d, j) = (e.d, &e.j);
    // ik ∂β a_αα from the second-order formula, and ik ∂α a_βα with the k-correction.
    let side_b = j.reduce(&j.d_beta_ik(j.x2_rhs(), Level::SecondOrder)?, Level::SecondOrder)?;
    let side_a = j.d_alpha_total(j.ikab_second(), true, Level::SecondOrder)?;
    let diff = j.sub(&side_b, &side_a)?;
    let target = third_order_poly(e, "")?;

    let p11 = e.p("p11")?;
    let x3 = d.add(&d.scale(&d.mul(&p11, &p11)?, 2, 1)?, &e.dp("p11", &[DiffVar::A])?)?;
    let y2 = d.scale(
        &d.add(
            &d.mul(&e.pb("p11")?, &e.dp("p2", &[DiffVar::Abar])?)?,
            &e.dp("p2", &[DiffVar::Abar, DiffVar::Abar])?,
        )?,
        -1,
        2,
    )?;
    let mx3 = JetMono::ONE.with(Sym::X, 3);
    let my2 = JetMono::ONE.with(Sym::Y, 2);
    let coef = |p: &JetPoly<D::Elem>, m| j.coeff_or_zero(p, m);
    let mut residuals = vec![
        named("beta side X^3 coefficient - (2 p11^2 + d p11/d a)", e.k(d.sub(&coef(&side_b, mx3), &x3)?)),
        named("alpha side X^3 coefficient - (2 p11^2 + d p11/d a)", e.k(d.sub(&coef(&side_a, mx3), &x3)?)),
        named("beta side Y^2 coefficient - stated value", e.k(d.sub(&coef(&side_b, my2), &y2)?)),
        named("alpha side Y^2 coefficient - stated value", e.k(d.sub(&coef(&side_a, my2), &y2)?)),
    ];
    let plus = j.sub(&diff, &target)?;
    let minus = j.add(&diff, &target)?;
    let sign = if j.vanishes(&plus) {
        Some(1)
    } else if j.vanishes(&minus) {
        Some(-1)
    } else {
        None
    };
    residuals.push(named(
        "mixed difference - sigma (p16 X^2 + p17 X + p18 Y + p19)",
        if sign == Some(-1) { minus } else { plus },
    ));
    let mut ev = Evidence::new(residuals);
    ev.sign = sign;

    // Per-side coefficients against the printed sub-entries.
    for (side, p, suffix) in [("beta", &side_b, "a"), ("alpha", &side_a, "b")] {
        let sub = third_order_poly(e, suffix)?;
        let mut matches = Vec::new();
        for (m, n) in [
            (JetMono::ONE.with(Sym::X, 2), 16),
            (JetMono::sym(Sym::X), 17),
            (JetMono::sym(Sym::Y), 18),
            (JetMono::ONE, 19),
        ] {
            let ok = same(e, &coef(p, m), &coef(&sub, m))?;
            matches.push(format!("p{n}{suffix}={ok}"));
        }
        ev.notes.push(format!("{side} side matches printed {}", matches.join(" ")));
    }

    // Amended conj(a_alpha) coefficients: -p7bar d p12/d abar in place of
    // -p7bar d p2/d abar on the beta side, and the alpha-derivative of
    // d p2/d abar in place of that of d p2/d a on the alpha side.
    let p7b = e.pb("p7")?;
    let dab_p2 = e.dp("p2", &[DiffVar::Abar])?;
    let p18a = d.add(
        &e.p("p18a")?,
        &d.mul(&p7b, &d.sub(&dab_p2, &e.dp("p12", &[DiffVar::Abar])?)?)?,
    )?;
    let p18b = d.add(
        &e.p("p18b")?,
        &d.scale(
            &d.sub(
                &e.dp("p2", &[DiffVar::A, DiffVar::Alpha])?,
                &e.dp("p2", &[DiffVar::Abar, DiffVar::Alpha])?,
            )?,
            1,
            2,
        )?,
    )?;
    let my = JetMono::sym(Sym::Y);
    ev.notes.push(format!(
        "amended p18a matches beta side: {}",
        same(e, &coef(&side_b, my), &p18a)?
    ));
    ev.notes.push(format!(
        "amended p18b matches alpha side: {}",
        same(e, &coef(&side_a, my), &p18b)?
    ));
    let p18r = d.sub(&p18a, &p18b)?;
    ev.notes.push(format!("re-derived p18 vanishes: {}", d.value_is_zero(&p18r)));
    let target_r = j.add(
        &e.mono(&[(Sym::X, 2)], e.p("p16")?),
        &j.lin(&[(Sym::X, e.p("p17")?), (Sym::Y, p18r)], e.p("p19")?),
    )?;
    let plus_r = j.sub(&diff, &target_r)?;
    let minus_r = j.add(&diff, &target_r)?;
    let rr = if !j.vanishes(&plus_r) && j.vanishes(&minus_r) {
        ev.notes.push("re-derived sign: -1".into());
        minus_r
    } else {
        ev.notes.push("re-derived sign: +1".into());
        plus_r
    };
    ev.variants.push((
        "rederived".into(),
        vec![named("mixed difference - sigma (p16 X^2 + p17 X + p18' Y + p19)", rr)],
    ));
    Ok(ev)
}

fn cubic_elim<D: Domain>(e: &Env<D>) -> Result<Evidence<D::Elem>> {
    let (d, j) = (e.d, &e.j);
    let x_minus = j.lin(&[(Sym::X, d.one())], d.neg(&e.pb("p7")?));
    let lhs = j.reduce(&j.mul(&x_minus, &third_order_poly(e, "")?)?, Level::Closed)?;
    let cubic = e.sum(&[
        e.mono(&[(Sym::X, 3)], e.p("p16")?),
        e.mono(&[(Sym::X, 2)], e.p("p20")?),
        j.lin(&[(Sym::X, e.p("p21")?)], e.p("p22")?),
    ])?;
    Ok(Evidence::new(vec![named("eliminated - cubic", j.sub(&lhs, &cubic)?)]))
}

fn e318_320<D: Domain>(e: &Env<D>) -> Result<Evidence<D::Elem>> {
    let (d, j) = (e.d, &e.j);
    let p7 = e.p("p7")?;
    let p7b = e.pb("p7")?;
    let p2 = e.p("p2")?;
    let p2b = e.pb("p2")?;
    let branch = [(Sym::X, p7b.clone()), (Sym::Y, p7.clone())];
    let dp7b = |v| d.diff(&p7b, v);

    // ik ∂β a_α with a_α = p̄7.
    let beta = j.substitute(&j.d_beta_ik(&e.k(p7b.clone()), Level::FirstOrder)?, &branch)?;
    let d18 = d.sub(
        &d.mul(&dp7b(DiffVar::A)?, &d.sub(&p7b, &p2)?)?,
        &d.mul(&dp7b(DiffVar::Abar)?, &d.sub(&p7, &p2b)?)?,
    )?;
    let r18 = j.sub(&beta, &e.k(d18.clone()))?;

    // ik ∂α a_β with a_αα the total α-derivative of p̄7.
    let x2 = j.d_alpha_total(&e.k(p7b.clone()), false, Level::FirstOrder)?;
    let alpha_first = j.add(
        &j.sub(j.ikab_first(), &j.sym(Sym::X2))?,
        &x2,
    )?;
    let alpha = j.substitute(&alpha_first, &branch)?;
    let p1 = e.p("p1")?;
    let d19 = e.sum(&[
        e.k(dp7b(DiffVar::Alpha)?),
        e.k(d.mul(&dp7b(DiffVar::A)?, &p7b)?),
        e.k(d.mul(&dp7b(DiffVar::Abar)?, &p7)?),
        e.k(d.mul(&d.sub(&p1, &e.dp("p2", &[DiffVar::A])?)?, &p7b)?),
        e.k(d.neg(&d.mul(&e.dp("p2", &[DiffVar::Abar])?, &p7)?)),
        e.k(d.neg(&d.mul(&p1, &p2)?)),
        e.k(d.neg(&e.dp("p2", &[DiffVar::Alpha])?)),
    ])?;
    let r19 = j.sub(&alpha, &d19)?;

    let diff = j.sub(&e.k(d18), &d19)?;
    let f = e.k(e.p("F")?);
    let plus = j.sub(&diff, &f)?;
    let minus = j.add(&diff, &f)?;
    let sign = if j.vanishes(&plus) {
        Some(1)
    } else if j.vanishes(&minus) {
        Some(-1)
    } else {
        None
    };
    let mut ev = Evidence::new(vec![
        named("beta-side display", r18),
        named("alpha-side display", r19),
        named("beta side - alpha side - sigma F", if sign == Some(-1) { minus } else { plus }),
    ]);
    ev.sign = sign;
    Ok(ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::domain::Symbolic;

    #[test]
    fn every_check_passes_symbolically() {
        let cat = catalog::symbolic().unwrap();
        let mir = catalog::symbolic_mirrored().unwrap();
        let env = Env::new(&Symbolic, &cat, &mir).unwrap();
        for (id, _) in STATIC_CHECKS.iter().chain(JET_CHECKS) {
            if *id == "E322-residual" {
                continue;
            }
            let ev = run(id, &env).unwrap();
            for (name, r) in &ev.residuals {
                assert!(r.is_empty(), "{id}: {name}: {} terms", r.term_count());
            }
            assert!(ev.variants.is_empty(), "{id}");
        }
    }

    #[test]
    fn third_order_conj_coefficient_is_misprinted() {
        let cat = catalog::symbolic().unwrap();
        let mir = catalog::symbolic_mirrored().unwrap();
        let env = Env::new(&Symbolic, &cat, &mir).unwrap();
        let ev = run("E322-residual", &env).unwrap();
        let failing: Vec<_> = ev.residuals.iter().filter(|(_, r)| !r.is_empty()).map(|(n, _)| n.as_str()).collect();
        assert_eq!(failing, ["mixed difference - sigma (p16 X^2 + p17 X + p18 Y + p19)"]);
        let (name, rr) = &ev.variants[0];
        assert_eq!(name, "rederived");
        assert!(rr.iter().all(|(_, r)| r.is_empty()));
        for n in [
            "amended p18a matches beta side: true",
            "amended p18b matches alpha side: true",
            "re-derived p18 vanishes: true",
            "re-derived sign: +1",
        ] {
            assert!(ev.notes.iter().any(|x| x == n), "{n}: {:?}", ev.notes);
        }
    }
}
