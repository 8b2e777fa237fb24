//! The named structure functions p1 … p22, κ and F.
//!
//! Every entry is produced by one generic recipe that runs in any
//! [`Domain`]. With `mirrored = true` the recipe is executed with the roles
//! of a and ā exchanged (variables and Wirtinger derivatives), which yields
//! the swap images p̄ᵢ(α, a, ā) = pᵢ(α, ā, a) by an independent route.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::domain::{Domain, Symbolic};
use crate::error::{EngineError, Result};
use crate::kernel::{DiffVar, TrigRational, Var};

/// Ids in construction order, with their descriptions.
pub const ENTRIES: &[(&str, &str)] = &[
    ("kappa", "|c|^2 from the Ricci equation: a*abar + (rho/2)(-2 + 3 sin^2 alpha)"),
    ("p1", "coefficient of k in k_alpha = -p1 k"),
    ("p2", "a_alpha - ik a_beta = p2"),
    ("p3", "c_alpha + ik c_beta = 2 c p3"),
    ("p4", "conj(c) c_alpha - a abar_alpha = p4"),
    ("p5", "conj(c) c_beta - a abar_beta = (i/k) p5"),
    ("p6", "constant term of |c_alpha|^2 - |a_alpha|^2"),
    ("p7", "|a_alpha|^2 = p7 a_alpha + conj(p7 a_alpha) + p8, linear coefficient"),
    ("p8", "|a_alpha|^2 = p7 a_alpha + conj(p7 a_alpha) + p8, constant term"),
    ("p9a", "alpha-derivative of the |a_alpha|^2 relation, linear coefficient"),
    ("p9b", "beta-derivative of the |a_alpha|^2 relation, linear coefficient"),
    ("p10a", "alpha-derivative of the |a_alpha|^2 relation, constant term"),
    ("p10b", "beta-derivative of the |a_alpha|^2 relation, constant term"),
    ("p11", "a_alpha_alpha = p11 a_alpha^2 + ..., quadratic coefficient"),
    ("p12", "a_alpha_alpha = ... + p12 a_alpha + ..., linear coefficient"),
    ("p13", "a_alpha_alpha = ... + p13, constant term"),
    ("p14", "ik a_beta_alpha = ... + p14 a_alpha + ..., linear coefficient"),
    ("p15", "ik a_beta_alpha = ... + p15, constant term"),
    ("p16a", "ik d/dbeta a_alpha_alpha, coefficient of a_alpha^2"),
    ("p16b", "ik d/dalpha a_beta_alpha, coefficient of a_alpha^2"),
    ("p16", "third-order compatibility, coefficient of a_alpha^2"),
    ("p17a", "ik d/dbeta a_alpha_alpha, coefficient of a_alpha"),
    ("p17b", "ik d/dalpha a_beta_alpha, coefficient of a_alpha"),
    ("p17", "third-order compatibility, coefficient of a_alpha"),
    ("p18a", "ik d/dbeta a_alpha_alpha, coefficient of conj(a_alpha)"),
    ("p18b", "ik d/dalpha a_beta_alpha, coefficient of conj(a_alpha)"),
    ("p18", "third-order compatibility, coefficient of conj(a_alpha)"),
    ("p19a", "ik d/dbeta a_alpha_alpha, constant term"),
    ("p19b", "ik d/dalpha a_beta_alpha, constant term"),
    ("p19", "third-order compatibility, constant term"),
    ("p20", "cubic for a_alpha, coefficient of a_alpha^2"),
    ("p21", "cubic for a_alpha, coefficient of a_alpha"),
    ("p22", "cubic for a_alpha, constant term"),
    ("F", "compatibility function on the branch conj(a_alpha) = p7"),
];

/// The primary ids p1 … p22 (without sub-entries).
pub fn primary_ids() -> Vec<String> {
    (1..=22).map(|i| format!("p{i}")).collect()
}

/// Entries that involve the cubic root P = p23 and therefore live in the
/// ring extended by P and its conjugate; evaluated numerically.
pub const ROOT_ENTRIES: &[(&str, &str, &str)] = &[
    ("p23", "a non-real root P of p16 X^3 + p20 X^2 + p21 X + p22", "root of the cubic for a_alpha"),
    (
        "p24",
        "(d p16/d alpha P^3 + d p20/d alpha P^2 + d p21/d alpha P + d p22/d alpha) / (3 p16 P^2 + 2 p20 P + p21)",
        "dP/d alpha = -p24",
    ),
    (
        "p25",
        "(d p16/d a P^3 + d p20/d a P^2 + d p21/d a P + d p22/d a) / (3 p16 P^2 + 2 p20 P + p21)",
        "dP/d a = -p25",
    ),
    (
        "p26",
        "(d p16/d abar P^3 + d p20/d abar P^2 + d p21/d abar P + d p22/d abar) / (3 p16 P^2 + 2 p20 P + p21)",
        "dP/d abar = -p26",
    ),
    (
        "G",
        "p1 p2 + d p2/d alpha - (p1 - d p2/d a) P + d p2/d abar conj(P) + p24 + p2 p25 - (conj(p2) - 2 conj(P)) p26",
        "compatibility function on the branch a_alpha = p23",
    ),
];

pub fn anchor(id: &str) -> Option<&'static str> {
    ENTRIES
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, a)| *a)
        .or_else(|| ROOT_ENTRIES.iter().find(|(k, _, _)| *k == id).map(|(_, _, a)| *a))
}

/// Recipe context: the domain plus the orientation.
struct Ctx<'d, D: Domain> {
    d: &'d D,
    mirrored: bool,
}

impl<'d, D: Domain> Ctx<'d, D> {
    fn a(&self) -> D::Elem {
        self.d.var(if self.mirrored { Var::Abar } else { Var::A })
    }
    fn ab(&self) -> D::Elem {
        self.d.var(if self.mirrored { Var::A } else { Var::Abar })
    }
    fn da(&self, x: &D::Elem) -> Result<D::Elem> {
        self.d.diff(x, if self.mirrored { DiffVar::Abar } else { DiffVar::A })
    }
    fn dab(&self, x: &D::Elem) -> Result<D::Elem> {
        self.d.diff(x, if self.mirrored { DiffVar::A } else { DiffVar::Abar })
    }
    fn dal(&self, x: &D::Elem) -> Result<D::Elem> {
        self.d.diff(x, DiffVar::Alpha)
    }
    fn bar(&self, x: &D::Elem) -> Result<D::Elem> {
        self.d.conj(x)
    }
    fn q(&self, n: i64, den: i64) -> D::Elem {
        self.d.ratio(n, den)
    }
    fn add(&self, x: &D::Elem, y: &D::Elem) -> Result<D::Elem> {
        self.d.add(x, y)
    }
    fn sub(&self, x: &D::Elem, y: &D::Elem) -> Result<D::Elem> {
        self.d.sub(x, y)
    }
    fn mul(&self, x: &D::Elem, y: &D::Elem) -> Result<D::Elem> {
        self.d.mul(x, y)
    }
    fn div(&self, x: &D::Elem, y: &D::Elem) -> Result<D::Elem> {
        self.d.div(x, y)
    }
    /// Σ terms.
    fn sum(&self, terms: &[D::Elem]) -> Result<D::Elem> {
        let mut acc = self.d.zero();
        for t in terms {
            acc = self.add(&acc, t)?;
        }
        Ok(acc)
    }
    /// Π factors.
    fn prod(&self, factors: &[&D::Elem]) -> Result<D::Elem> {
        let mut acc = self.d.one();
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }
    fn neg(&self, x: &D::Elem) -> D::Elem {
        self.d.neg(x)
    }
}

/// All entries of one orientation in one domain.
pub struct Catalog<D: Domain> {
    pub mirrored: bool,
    entries: HashMap<&'static str, D::Elem>,
    derivs: Mutex<HashMap<(String, Vec<DiffVar>), D::Elem>>,
    bars: Mutex<HashMap<String, D::Elem>>,
}

impl<D: Domain> Catalog<D> {
    pub fn build(d: &D, mirrored: bool) -> Result<Self> {
        let entries = build_entries(&Ctx { d, mirrored })?;
        Ok(Catalog {
            mirrored,
            entries,
            derivs: Mutex::new(HashMap::new()),
            bars: Mutex::new(HashMap::new()),
        })
    }

    pub fn get(&self, id: &str) -> Result<&D::Elem> {
        self.entries
            .get(id)
            .ok_or_else(|| EngineError::UnknownId(id.to_string()))
    }

    /// Repeated partial derivative of an entry, cached.
    pub fn d(&self, d: &D, id: &str, vars: &[DiffVar]) -> Result<D::Elem> {
        if vars.is_empty() {
            return self.get(id).cloned();
        }
        let key = (id.to_string(), vars.to_vec());
        if let Some(v) = self.derivs.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let inner = self.d(d, id, &vars[..vars.len() - 1])?;
        let out = d.diff(&inner, vars[vars.len() - 1])?;
        self.derivs.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// Conjugate of an entry, cached.
    pub fn bar(&self, d: &D, id: &str) -> Result<D::Elem> {
        if let Some(v) = self.bars.lock().unwrap().get(id) {
            return Ok(v.clone());
        }
        let out = d.conj(self.get(id)?)?;
        self.bars.lock().unwrap().insert(id.to_string(), out.clone());
        Ok(out)
    }
}

fn build_entries<D: Domain>(c: &Ctx<'_, D>) -> Result<HashMap<&'static str, D::Elem>> {
    let mut m: HashMap<&'static str, D::Elem> = HashMap::new();
    let d = c.d;
    let (a, ab) = (c.a(), c.ab());
    let s = d.var(Var::S);
    let co = d.var(Var::C);
    let rho = d.var(Var::Rho);
    let b = d.var(Var::B);
    let s2 = c.mul(&s, &s)?;
    let sc = c.mul(&s, &co)?;
    let cot = c.div(&co, &s)?;
    // (ρ/2)(−2 + 3 s²)
    let k0 = c.mul(&c.mul(&rho, &c.q(1, 2))?, &c.add(&c.q(-2, 1), &c.mul(&c.q(3, 1), &s2)?)?)?;
    let kappa = c.add(&c.mul(&a, &ab)?, &k0)?;
    let apb = c.add(&a, &b)?;
    let abpb = c.add(&ab, &b)?;
    let three_half_rho_s2 = c.prod(&[&c.q(3, 2), &rho, &s2])?;

    let p1 = c.div(
        &c.mul(&c.add(&c.mul(&c.sub(&a, &b)?, &c.sub(&ab, &b)?)?, &three_half_rho_s2)?, &cot)?,
        &c.mul(&apb, &abpb)?,
    )?;
    let p2 = c.div(
        &c.mul(
            &c.add(&c.prod(&[&c.q(2, 1), &a, &c.sub(&ab, &b)?])?, &three_half_rho_s2)?,
            &cot,
        )?,
        &abpb,
    )?;
    let p3 = c.mul(&c.div(&c.sub(&a, &b)?, &apb)?, &cot)?;
    let p2b = c.bar(&p2)?;
    let p3b = c.bar(&p3)?;

    let p4 = c.sum(&[
        c.mul(&kappa, &c.sub(&p3, &p3b)?)?,
        c.mul(&c.q(1, 2), &c.sub(&c.mul(&ab, &p2)?, &c.mul(&a, &p2b)?)?)?,
        c.prod(&[&c.q(3, 2), &rho, &sc])?,
    ])?;
    let p5 = c.sum(&[
        c.mul(&a, &p2b)?,
        c.neg(&c.prod(&[&c.q(2, 1), &kappa, &p3])?),
        p4.clone(),
    ])?;
    let p4b = c.bar(&p4)?;
    let dal_p2 = c.dal(&p2)?;
    let p6 = c.sum(&[
        c.mul(&p4, &c.sub(&p3b, &p3)?)?,
        c.neg(&c.mul(&kappa, &c.dal(&p3)?)?),
        c.mul(
            &c.q(1, 2),
            &c.sum(&[
                c.mul(&p1, &p5)?,
                c.mul(&a, &c.bar(&dal_p2)?)?,
                c.dal(&p4)?,
                c.neg(&c.mul(&p2, &c.da(&p4)?)?),
                c.mul(&p2b, &c.dab(&p4)?)?,
            ])?,
        )?,
    ])?;
    // 3ρ s c / (4(a+b))
    let coef = c.div(&c.prod(&[&c.q(3, 1), &rho, &sc])?, &c.mul(&c.q(4, 1), &apb)?)?;
    let p7 = c.div(&c.add(&c.mul(&ab, &p4)?, &c.mul(&coef, &kappa)?)?, &k0)?;
    let p8 = c.div(&c.sub(&c.mul(&p4, &p4b)?, &c.mul(&kappa, &p6)?)?, &k0)?;
    let p7b = c.bar(&p7)?;

    let dab_p7 = c.dab(&p7)?;
    let dab_p7_b = c.bar(&dab_p7)?;
    let da_p8 = c.da(&p8)?;
    let p9a = c.sum(&[
        c.dal(&p7)?,
        c.mul(&c.add(&dab_p7, &dab_p7_b)?, &p7)?,
        da_p8.clone(),
    ])?;
    let p9b = c.sum(&[
        c.mul(&p1, &c.add(&c.neg(&p2b), &p7)?)?,
        c.neg(&c.bar(&dal_p2)?),
        c.neg(&c.mul(&p2, &c.da(&p7)?)?),
        c.mul(&p2b, &dab_p7)?,
        c.neg(&c.mul(&p7, &c.bar(&c.da(&p2)?)?)?),
        c.mul(&p7b, &c.bar(&c.dab(&p2)?)?)?,
        c.neg(&c.mul(&p7, &c.sub(&dab_p7, &dab_p7_b)?)?),
        da_p8,
    ])?;
    let p10a = c.add(&c.mul(&p8, &c.add(&dab_p7, &dab_p7_b)?)?, &c.dal(&p8)?)?;
    let p2p7 = c.mul(&p2, &p7)?;
    let p7_dal_p2 = c.mul(&p7, &dal_p2)?;
    let da_p2 = c.da(&p2)?;
    let p10b = c.sum(&[
        c.mul(&p1, &c.add(&c.neg(&p2p7), &c.bar(&p2p7)?)?)?,
        c.neg(&c.mul(&p2, &c.da(&p8)?)?),
        c.mul(&p2b, &c.dab(&p8)?)?,
        c.neg(&p7_dal_p2),
        c.bar(&p7_dal_p2)?,
        c.mul(
            &p8,
            &c.sum(&[da_p2.clone(), c.neg(&c.bar(&da_p2)?), c.neg(&dab_p7), dab_p7_b.clone()])?,
        )?,
    ])?;

    // 2(|p7|² + p8)
    let n7 = c.add(&c.mul(&p7, &p7b)?, &p8)?;
    let two_n7 = c.mul(&c.q(2, 1), &n7)?;
    let p9a_b = c.bar(&p9a)?;
    let p9b_b = c.bar(&p9b)?;
    let p9_sum = c.add(&p9a, &p9b)?;
    let p9_bar_diff = c.sub(&p9a_b, &p9b_b)?;
    let p10_sum = c.add(&p10a, &p10b)?;
    let dab_p2 = c.dab(&p2)?;
    let p11 = c.div(&p9_sum, &two_n7)?;
    let p12 = c.div(
        &c.sum(&[
            c.prod(&[&p7, &p7, &dab_p2])?,
            c.mul(&p7, &p9_bar_diff)?,
            c.neg(&c.mul(&p7b, &p9_sum)?),
            p10_sum.clone(),
        ])?,
        &two_n7,
    )?;
    let p13 = c.div(
        &c.sum(&[
            c.prod(&[&p7, &p8, &dab_p2])?,
            c.neg(&c.mul(&p7b, &p10_sum)?),
            c.mul(&p8, &p9_bar_diff)?,
        ])?,
        &two_n7,
    )?;
    let p14 = c.add(&c.sub(&p1, &da_p2)?, &p12)?;
    let p15 = c.sum(&[c.neg(&c.mul(&p1, &p2)?), c.neg(&dal_p2), p13.clone()])?;

    let da_p11 = c.da(&p11)?;
    let dab_p11 = c.dab(&p11)?;
    let two = c.q(2, 1);
    let p16a = c.sum(&[
        c.mul(&p11, &c.add(&p12, &c.mul(&two, &p14)?)?)?,
        c.neg(&c.mul(&p2, &da_p11)?),
        c.mul(&p2b, &dab_p11)?,
        c.neg(&c.mul(&p7, &dab_p11)?),
        c.da(&p12)?,
    ])?;
    let p16b = c.sum(&[
        c.mul(&p11, &c.sum(&[p1.clone(), c.mul(&two, &p12)?, p14.clone()])?)?,
        c.dal(&p11)?,
        c.mul(&p7, &dab_p11)?,
        c.da(&p14)?,
    ])?;
    let p16 = c.sub(&p16a, &p16b)?;

    let dab_p2_b = c.bar(&dab_p2)?;
    let quarter_abs = c.prod(&[&c.q(1, 4), &dab_p2, &dab_p2_b])?;
    let dab_da_p2 = c.da(&dab_p2)?;
    let dab_dab_p2 = c.dab(&dab_p2)?;
    let half_p7_mixed = c.prod(&[&c.q(1, 2), &p7, &dab_da_p2])?;
    let p7_p11_dab_p2 = c.prod(&[&p7, &p11, &dab_p2])?;
    let n7_dab_p11 = c.mul(&n7, &dab_p11)?;
    let dab_p12 = c.dab(&p12)?;
    let p17a = c.sum(&[
        c.prod(&[&two, &p11, &p15])?,
        c.mul(&p12, &p14)?,
        quarter_abs.clone(),
        half_p7_mixed.clone(),
        c.neg(&p7_p11_dab_p2),
        c.neg(&n7_dab_p11),
        c.neg(&c.mul(&p2, &c.da(&p12)?)?),
        c.mul(&p2b, &dab_p12)?,
        c.neg(&c.mul(&p7, &dab_p12)?),
        c.da(&p13)?,
    ])?;
    let p17b = c.sum(&[
        c.mul(&p1, &p14)?,
        c.prod(&[&two, &p11, &p13])?,
        c.mul(&p12, &p14)?,
        c.neg(&quarter_abs),
        c.neg(&half_p7_mixed),
        p7_p11_dab_p2.clone(),
        n7_dab_p11.clone(),
        c.mul(&p7, &c.dab(&p14)?)?,
        c.dal(&p14)?,
        c.da(&p15)?,
    ])?;
    let p17 = c.sub(&p17a, &p17b)?;

    let p12b = c.bar(&p12)?;
    let p13b = c.bar(&p13)?;
    let p14b = c.bar(&p14)?;
    let p15b = c.bar(&p15)?;
    let half = c.q(1, 2);
    let neg_half = c.q(-1, 2);
    let p7b_sq_dab_p11 = c.prod(&[&p7b, &p7b, &dab_p11])?;
    let p18a = c.sum(&[
        c.prod(&[
            &neg_half,
            &c.sum(&[
                c.mul(&two, &p7b)?,
                c.prod(&[&two, &p7b, &p11])?,
                p12.clone(),
                p14b.clone(),
            ])?,
            &dab_p2,
        ])?,
        c.prod(&[&half, &c.sub(&p7b, &p2)?, &dab_da_p2])?,
        c.prod(&[&half, &p2b, &dab_dab_p2])?,
        c.neg(&p7b_sq_dab_p11),
        c.neg(&c.dab(&p13)?),
    ])?;
    let p18b = c.sum(&[
        c.prod(&[
            &neg_half,
            &c.sum(&[
                p1.clone(),
                c.neg(&c.prod(&[&two, &p7b, &p11])?),
                p12b.clone(),
                c.neg(&p14),
            ])?,
            &dab_p2,
        ])?,
        c.neg(&c.mul(&half, &c.dal(&da_p2)?)?),
        c.neg(&c.prod(&[&half, &p7b, &dab_da_p2])?),
        p7b_sq_dab_p11.clone(),
        c.mul(&p7b, &c.dab(&p14)?)?,
        c.dab(&p15)?,
    ])?;
    let p18 = c.sub(&p18a, &p18b)?;

    let p7p8_b = c.bar(&c.mul(&p7, &p8)?)?;
    let p19a = c.sum(&[
        c.mul(&p12, &p15)?,
        c.neg(&c.prod(&[
            &half,
            &c.add(&c.prod(&[&two, &p8, &p11])?, &p15b)?,
            &dab_p2,
        ])?),
        c.prod(&[&half, &p8, &dab_da_p2])?,
        c.neg(&c.mul(&p7p8_b, &dab_p11)?),
        c.neg(&c.mul(&p8, &dab_p12)?),
        c.neg(&c.mul(&p2, &c.da(&p13)?)?),
        c.mul(&p2b, &c.dab(&p13)?)?,
    ])?;
    let p19b = c.sum(&[
        c.mul(&p1, &p15)?,
        c.mul(&p13, &p14)?,
        c.prod(&[
            &half,
            &c.sub(&c.prod(&[&two, &p8, &p11])?, &p13b)?,
            &dab_p2,
        ])?,
        c.neg(&c.prod(&[&half, &p8, &dab_da_p2])?),
        c.mul(&p7p8_b, &dab_p11)?,
        c.mul(&p8, &c.dab(&p14)?)?,
        c.dal(&p15)?,
    ])?;
    let p19 = c.sub(&p19a, &p19b)?;

    let p20 = c.add(&c.neg(&c.mul(&p7b, &p16)?), &p17)?;
    let p21 = c.sum(&[c.neg(&c.mul(&p7b, &p17)?), c.mul(&p7, &p18)?, p19.clone()])?;
    let p22 = c.sub(&c.mul(&p8, &p18)?, &c.mul(&p7b, &p19)?)?;

    let p3p7_b = c.bar(&c.mul(&p3, &p7)?)?;
    let f = c.sum(&[
        c.mul(&p1, &p2)?,
        c.neg(&c.mul(&p1, &p7b)?),
        c.mul(&two, &p3p7_b)?,
        dal_p2.clone(),
        c.prod(&[&half, &p2b, &dab_p2])?,
        c.neg(&c.dal(&p7b)?),
        c.neg(&c.mul(&p2, &c.da(&p7b)?)?),
    ])?;

    for (k, v) in [
        ("kappa", kappa),
        ("p1", p1),
        ("p2", p2),
        ("p3", p3),
        ("p4", p4),
        ("p5", p5),
        ("p6", p6),
        ("p7", p7),
        ("p8", p8),
        ("p9a", p9a),
        ("p9b", p9b),
        ("p10a", p10a),
        ("p10b", p10b),
        ("p11", p11),
        ("p12", p12),
        ("p13", p13),
        ("p14", p14),
        ("p15", p15),
        ("p16a", p16a),
        ("p16b", p16b),
        ("p16", p16),
        ("p17a", p17a),
        ("p17b", p17b),
        ("p17", p17),
        ("p18a", p18a),
        ("p18b", p18b),
        ("p18", p18),
        ("p19a", p19a),
        ("p19b", p19b),
        ("p19", p19),
        ("p20", p20),
        ("p21", p21),
        ("p22", p22),
        ("F", f),
    ] {
        m.insert(k, v);
    }
    Ok(m)
}

/// A catalog entry as exposed to users.
#[derive(Clone, Debug)]
pub struct PEntry {
    pub id: String,
    pub expr: TrigRational,
    pub anchor: &'static str,
}

/// The coefficients of the cubic p16 X³ + p20 X² + p21 X + p22.
#[derive(Clone, Debug)]
pub struct CubicCoeffs<E> {
    pub c3: E,
    pub c2: E,
    pub c1: E,
    pub c0: E,
}

impl<D: Domain> Catalog<D> {
    pub fn cubic_coeffs(&self) -> Result<CubicCoeffs<D::Elem>> {
        Ok(CubicCoeffs {
            c3: self.get("p16")?.clone(),
            c2: self.get("p20")?.clone(),
            c1: self.get("p21")?.clone(),
            c0: self.get("p22")?.clone(),
        })
    }
}

impl Catalog<Symbolic> {
    pub fn entry(&self, id: &str) -> Result<PEntry> {
        let expr = self.get(id)?.clone();
        let anchor = anchor(id).ok_or_else(|| EngineError::UnknownId(id.to_string()))?;
        Ok(PEntry {
            id: id.to_string(),
            expr,
            anchor,
        })
    }

    pub fn f_expr(&self) -> Result<TrigRational> {
        self.get("F").cloned()
    }

    /// G ingredients with p18 replaced; p21 and p22 are re-formed from it.
    pub fn g_template_with_p18(&self, p18: &TrigRational) -> Result<GTemplate> {
        let mut t = self.g_template()?;
        let p7 = self.get("p7")?;
        let p7b = self.bar(&Symbolic, "p7")?;
        let (p8, p17, p19) = (self.get("p8")?, self.get("p17")?, self.get("p19")?);
        let p21 = p7b.mul(p17)?.neg().add(&p7.mul(p18)?)?.add(p19)?;
        let p22 = p8.mul(p18)?.sub(&p7b.mul(p19)?)?;
        for (row, v) in [DiffVar::Alpha, DiffVar::A, DiffVar::Abar].into_iter().enumerate() {
            t.d_cubic[row][2] = p21.differentiate(v)?;
            t.d_cubic[row][3] = p22.differentiate(v)?;
        }
        t.cubic[2] = p21;
        t.cubic[3] = p22;
        Ok(t)
    }

    /// The exact ingredients of G; P and conj(P) stay formal.
    pub fn g_template(&self) -> Result<GTemplate> {
        let d = Symbolic;
        let cubic = ["p16", "p20", "p21", "p22"];
        let mut d_cubic: [[TrigRational; 4]; 3] = Default::default();
        for (row, v) in [DiffVar::Alpha, DiffVar::A, DiffVar::Abar].into_iter().enumerate() {
            for (k, id) in cubic.iter().enumerate() {
                d_cubic[row][k] = self.d(&d, id, &[v])?;
            }
        }
        Ok(GTemplate {
            p1: self.get("p1")?.clone(),
            p2: self.get("p2")?.clone(),
            p2bar: self.bar(&d, "p2")?,
            d_alpha_p2: self.d(&d, "p2", &[DiffVar::Alpha])?,
            d_a_p2: self.d(&d, "p2", &[DiffVar::A])?,
            d_abar_p2: self.d(&d, "p2", &[DiffVar::Abar])?,
            cubic: [
                self.get("p16")?.clone(),
                self.get("p20")?.clone(),
                self.get("p21")?.clone(),
                self.get("p22")?.clone(),
            ],
            d_cubic,
        })
    }
}

/// G with P, conj(P) formal: every coefficient is an exact expression.
///
/// G = p1 p2 + ∂α p2 − (p1 − ∂a p2) P + ∂ā p2 P̄ + p24 + p2 p25 − (p̄2 − 2P̄) p26
/// with p24, p25, p26 = (∂c3 P³ + ∂c2 P² + ∂c1 P + ∂c0)/(3 c3 P² + 2 c2 P + c1)
/// for ∂ = ∂α, ∂a, ∂ā.
#[derive(Clone, Debug)]
pub struct GTemplate {
    pub p1: TrigRational,
    pub p2: TrigRational,
    pub p2bar: TrigRational,
    pub d_alpha_p2: TrigRational,
    pub d_a_p2: TrigRational,
    pub d_abar_p2: TrigRational,
    /// p16, p20, p21, p22.
    pub cubic: [TrigRational; 4],
    /// Rows ∂α, ∂a, ∂ā of the cubic coefficients.
    pub d_cubic: [[TrigRational; 4]; 3],
}

impl GTemplate {
    /// All expressions, in a fixed order, for bulk evaluation.
    pub fn parts(&self) -> Vec<&TrigRational> {
        let mut v = vec![&self.p1, &self.p2, &self.p2bar, &self.d_alpha_p2, &self.d_a_p2, &self.d_abar_p2];
        v.extend(self.cubic.iter());
        for row in &self.d_cubic {
            v.extend(row.iter());
        }
        v
    }
}

/// Symbolic catalog in the standard orientation.
pub fn symbolic() -> Result<Catalog<Symbolic>> {
    Catalog::build(&Symbolic, false)
}

/// Symbolic catalog built in the mirrored orientation: its entries are the p̄ᵢ.
pub fn symbolic_mirrored() -> Result<Catalog<Symbolic>> {
    Catalog::build(&Symbolic, true)
}

/// Sizes and agreement of the two ways of forming p17.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P17OrderReport {
    /// Largest term count seen while reducing p17a and p17b separately and subtracting.
    pub after_reduction_peak: usize,
    /// Largest term count seen when the paired terms are combined first.
    pub before_reduction_peak: usize,
    /// Whether the paired terms cancel (they could also add up).
    pub paired_terms_cancel: bool,
    pub results_agree: bool,
}

/// Form p17 = p17a − p17b in both orders and compare.
///
/// The paired terms are ¼|∂ā p2|², ½ p7 ∂ā∂a p2, −p7 p11 ∂ā p2 and
/// −(|p7|²+p8) ∂ā p11, which occur with opposite signs in p17a and p17b.
pub fn p17_orders(cat: &Catalog<Symbolic>) -> Result<P17OrderReport> {
    let d = Symbolic;
    let g = |id: &str| cat.get(id).cloned();
    let (p1, p2, p7, p8, p11, p12, p13, p14, p15) = (
        g("p1")?,
        g("p2")?,
        g("p7")?,
        g("p8")?,
        g("p11")?,
        g("p12")?,
        g("p13")?,
        g("p14")?,
        g("p15")?,
    );
    let p2b = cat.bar(&d, "p2")?;
    let p7b = cat.bar(&d, "p7")?;
    let da = |x: &TrigRational| x.differentiate(DiffVar::A);
    let dab = |x: &TrigRational| x.differentiate(DiffVar::Abar);
    let two = TrigRational::from_int(2);
    let dab_p2 = dab(&p2)?;
    let dab_p11 = dab(&p11)?;
    let dab_p12 = dab(&p12)?;
    let n7 = p7.mul(&p7b)?.add(&p8)?;
    let paired = [
        TrigRational::ratio(1, 4).mul(&dab_p2)?.mul(&dab_p2.conjugate())?,
        TrigRational::ratio(1, 2).mul(&p7)?.mul(&da(&dab_p2)?)?,
        p7.mul(&p11)?.mul(&dab_p2)?.neg(),
        n7.mul(&dab_p11)?.neg(),
    ];
    let rest_a = [
        two.mul(&p11)?.mul(&p15)?,
        p12.mul(&p14)?,
        p2.mul(&da(&p12)?)?.neg(),
        p2b.mul(&dab_p12)?,
        p7.mul(&dab_p12)?.neg(),
        da(&p13)?,
    ];
    let rest_b = [
        p1.mul(&p14)?,
        two.mul(&p11)?.mul(&p13)?,
        p12.mul(&p14)?,
        p7.mul(&dab(&p14)?)?,
        p14.differentiate(DiffVar::Alpha)?,
        da(&p15)?,
    ];
    let mut peak_after = 0usize;
    let mut acc_a = TrigRational::zero();
    for t in rest_a.iter().chain(paired.iter()) {
        acc_a = acc_a.add(t)?;
        peak_after = peak_after.max(acc_a.term_count());
    }
    let mut acc_b = TrigRational::zero();
    for t in rest_b.iter().chain(paired.iter().map(|x| x.neg()).collect::<Vec<_>>().iter()) {
        acc_b = acc_b.add(t)?;
        peak_after = peak_after.max(acc_b.term_count());
    }
    let after = acc_a.sub(&acc_b)?;
    peak_after = peak_after.max(after.term_count());

    // Combine the pairs symbolically first: a − b keeps 2× each paired term.
    let mut peak_before = 0usize;
    let mut acc = TrigRational::zero();
    for t in &paired {
        acc = acc.add(&t.mul(&two)?)?;
        peak_before = peak_before.max(acc.term_count());
    }
    let paired_terms_cancel = acc.is_zero();
    for t in &rest_a {
        acc = acc.add(t)?;
        peak_before = peak_before.max(acc.term_count());
    }
    for t in &rest_b {
        acc = acc.sub(t)?;
        peak_before = peak_before.max(acc.term_count());
    }
    Ok(P17OrderReport {
        after_reduction_peak: peak_after,
        before_reduction_peak: peak_before,
        paired_terms_cancel,
        results_agree: after.equals(&acc)? && acc.equals(cat.get("p17")?)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::series::{SeriesDomain, DEFAULT_ORDER};
    use crate::kernel::{eval_exact, sample_point, AlphaTag, GaussianRational};
    use crate::lang::parse_expr;
    use std::sync::OnceLock;

    fn cat() -> &'static Catalog<Symbolic> {
        static C: OnceLock<Catalog<Symbolic>> = OnceLock::new();
        C.get_or_init(|| symbolic().unwrap())
    }

    #[test]
    fn p3_and_kappa_match_their_formulas() {
        let p3 = parse_expr("cot(alpha)*(a-b)/(a+b)").unwrap();
        assert!(cat().get("p3").unwrap().equals(&p3).unwrap());
        let k = parse_expr("a*abar + rho/2*(-2 + 3*sin(alpha)^2)").unwrap();
        assert!(cat().get("kappa").unwrap().equals(&k).unwrap());
    }

    #[test]
    fn p3_at_quarter_pi() {
        let z = GaussianRational::zero();
        let v = crate::kernel::point::eval_at_angle(
            cat().get("p3").unwrap(),
            &AlphaTag::Pi4,
            &z,
            &GaussianRational::one(),
            &GaussianRational::from_int(3),
        )
        .unwrap();
        assert_eq!(v.p, GaussianRational::from_int(-1));
        assert!(v.q.is_zero());
    }

    #[test]
    fn unknown_id() {
        assert!(matches!(cat().get("p23"), Err(EngineError::UnknownId(_))));
    }

    #[test]
    fn series_catalog_agrees_with_exact_values() {
        for seed in [0u64, 5] {
            let pt = sample_point(seed);
            let dom = SeriesDomain::at_point(&pt, DEFAULT_ORDER);
            let sc = Catalog::build(&dom, false).unwrap();
            for id in ["p1", "p7", "p8", "p11", "p16", "p19", "p22", "F"] {
                let exact = eval_exact(cat().get(id).unwrap(), &pt).unwrap();
                assert_eq!(sc.get(id).unwrap().value(), &exact, "{id} at {pt}");
            }
        }
    }

    #[test]
    fn mirrored_build_is_the_conjugate() {
        let m = symbolic_mirrored().unwrap();
        for id in ["p2", "p7", "p12", "p17"] {
            let lhs = cat().get(id).unwrap().conjugate();
            assert!(lhs.equals(m.get(id).unwrap()).unwrap(), "{id}");
        }
    }

    #[test]
    fn p17_orders_agree() {
        let r = p17_orders(cat()).unwrap();
        assert!(r.results_agree);
        assert!(!r.paired_terms_cancel);
    }
}
