//! Jet extension of the base ring.
//!
//! Polynomials in the formal symbols X = a_α, Y = ā_α, X2 = a_αα, Y2 = ā_αα,
//! C = c, Cbar = c̄, W = c_α, Wbar = c̄_α, P, Pbar with coefficients in a
//! [`Domain`], together with the rewrite rules and the two total derivatives.

pub mod checks;

use std::collections::BTreeMap;
use std::fmt;

use crate::catalog::Catalog;
use crate::domain::Domain;
use crate::error::{EngineError, Result};
use crate::kernel::{DiffVar, TrigRational, Var};

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sym {
    X,
    Y,
    X2,
    Y2,
    C,
    Cbar,
    W,
    Wbar,
    P,
    Pbar,
}

impl Sym {
    pub const ALL: [Sym; 10] = [
        Sym::X,
        Sym::Y,
        Sym::X2,
        Sym::Y2,
        Sym::C,
        Sym::Cbar,
        Sym::W,
        Sym::Wbar,
        Sym::P,
        Sym::Pbar,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["X", "Y", "X2", "Y2", "C", "Cbar", "W", "Wbar", "P", "Pbar"][self.index()]
    }

    /// Conjugation partner; symbols are stored in adjacent pairs.
    pub fn conj(self) -> Sym {
        Sym::ALL[self.index() ^ 1]
    }

    /// Weight for the termination order; every rule strictly lowers it.
    fn weight(self) -> u32 {
        match self {
            Sym::X2 | Sym::Y2 => 3,
            _ => 1,
        }
    }
}

/// Exponent vector over the ten jet symbols.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct JetMono([u8; 10]);

impl JetMono {
    pub const ONE: JetMono = JetMono([0; 10]);

    pub fn sym(s: Sym) -> Self {
        Self::ONE.with(s, 1)
    }

    pub fn exp(&self, s: Sym) -> u32 {
        self.0[s.index()] as u32
    }

    pub fn with(mut self, s: Sym, e: u32) -> Self {
        self.0[s.index()] = u8::try_from(e).expect("jet exponent overflow");
        self
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut out = [0u8; 10];
        for i in 0..10 {
            out[i] = self.0[i].checked_add(o.0[i]).ok_or(EngineError::ExponentOverflow)?;
        }
        Ok(JetMono(out))
    }

    pub fn conj(&self) -> Self {
        let mut out = [0u8; 10];
        for s in Sym::ALL {
            out[s.conj().index()] = self.0[s.index()];
        }
        JetMono(out)
    }

    pub fn weight(&self) -> u32 {
        Sym::ALL.iter().map(|s| s.weight() * self.exp(*s)).sum()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }
}

impl fmt::Display for JetMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in Sym::ALL {
            let e = self.exp(s);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(s.name())?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A polynomial in the jet symbols with coefficients `E`.
#[derive(Clone, Debug)]
pub struct JetPoly<E> {
    terms: BTreeMap<JetMono, E>,
}

impl<E> Default for JetPoly<E> {
    fn default() -> Self {
        JetPoly {
            terms: BTreeMap::new(),
        }
    }
}

impl<E: Clone> JetPoly<E> {
    pub fn terms(&self) -> impl Iterator<Item = (&JetMono, &E)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &JetMono) -> Option<&E> {
        self.terms.get(m)
    }

    /// Symbols occurring anywhere.
    pub fn symbols(&self) -> Vec<Sym> {
        Sym::ALL
            .into_iter()
            .filter(|s| self.terms.keys().any(|m| m.exp(*s) > 0))
            .collect()
    }
}

impl JetPoly<TrigRational> {
    /// Render with jet symbols; coefficients in the expression syntax.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let cs = crate::lang::render(c);
            if m.is_one() {
                parts.push(format!("({cs})"));
            } else {
                parts.push(format!("({cs})*{m}"));
            }
        }
        parts.join(" + ")
    }

    /// Total numerator term count, for reports.
    pub fn term_count(&self) -> usize {
        self.terms.values().map(|c| c.term_count()).sum()
    }
}

/// Rule sets, each including the ones before it.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Level {
    /// C·Cbar → κ.
    Base,
    /// Adds Cbar·W → aY + p4 and its conjugate.
    FirstOrder,
    /// Adds X·Y → p7 X + p̄7 Y + p8.
    Closed,
    /// Adds the substitution for X2 and Y2.
    SecondOrder,
}

/// How rule instances inside one monomial are rewritten.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Strategy {
    /// One pair at a time.
    Pairwise,
    /// All pairs of a monomial at once, via a power of the right-hand side.
    Batched,
}

/// Operations on jet polynomials over a domain, plus the rule tables.
pub struct JetCtx<'c, D: Domain> {
    pub d: &'c D,
    pub cat: &'c Catalog<D>,
    kappa: D::Elem,
    xy_rhs: JetPoly<D::Elem>,
    cw_rhs: JetPoly<D::Elem>,
    cw_rhs_bar: JetPoly<D::Elem>,
    x2_rhs: JetPoly<D::Elem>,
    y2_rhs: JetPoly<D::Elem>,
    /// ik a_βα before the X2 substitution.
    ikab_first: JetPoly<D::Elem>,
    /// ik a_βα after it.
    ikab_second: JetPoly<D::Elem>,
}

impl<'c, D: Domain> JetCtx<'c, D> {
    pub fn new(d: &'c D, cat: &'c Catalog<D>) -> Result<Self> {
        let g = |id: &str| cat.get(id).cloned();
        let b = |id: &str| cat.bar(d, id);
        let dv = |id: &str, v: &[DiffVar]| cat.d(d, id, v);
        let mut ctx = JetCtx {
            d,
            cat,
            kappa: g("kappa")?,
            xy_rhs: JetPoly::default(),
            cw_rhs: JetPoly::default(),
            cw_rhs_bar: JetPoly::default(),
            x2_rhs: JetPoly::default(),
            y2_rhs: JetPoly::default(),
            ikab_first: JetPoly::default(),
            ikab_second: JetPoly::default(),
        };
        ctx.xy_rhs = ctx.lin(&[(Sym::X, g("p7")?), (Sym::Y, b("p7")?)], g("p8")?);
        ctx.cw_rhs = ctx.lin(&[(Sym::Y, d.var(Var::A))], g("p4")?);
        ctx.cw_rhs_bar = ctx.conj(&ctx.cw_rhs)?;
        let dab_p2 = dv("p2", &[DiffVar::Abar])?;
        let half_dab_p2 = d.scale(&dab_p2, 1, 2)?;
        let mut x2 = ctx.lin(&[(Sym::X, g("p12")?), (Sym::Y, half_dab_p2.clone())], g("p13")?);
        ctx.insert(&mut x2, JetMono::ONE.with(Sym::X, 2), g("p11")?);
        ctx.y2_rhs = ctx.conj(&x2)?;
        ctx.x2_rhs = x2;
        let p1 = g("p1")?;
        let p2 = g("p2")?;
        let x_coef = d.sub(&p1, &dv("p2", &[DiffVar::A])?)?;
        let c0 = d.neg(&d.add(&d.mul(&p1, &p2)?, &dv("p2", &[DiffVar::Alpha])?)?);
        ctx.ikab_first = ctx.lin(
            &[(Sym::X2, d.one()), (Sym::X, x_coef), (Sym::Y, d.neg(&dab_p2))],
            c0,
        );
        let mut second = ctx.lin(&[(Sym::X, g("p14")?), (Sym::Y, d.neg(&half_dab_p2))], g("p15")?);
        ctx.insert(&mut second, JetMono::ONE.with(Sym::X, 2), g("p11")?);
        ctx.ikab_second = second;
        Ok(ctx)
    }

    // ---- construction ----

    pub fn zero(&self) -> JetPoly<D::Elem> {
        JetPoly::default()
    }

    pub fn constant(&self, e: D::Elem) -> JetPoly<D::Elem> {
        let mut p = JetPoly::default();
        self.insert(&mut p, JetMono::ONE, e);
        p
    }

    pub fn sym(&self, s: Sym) -> JetPoly<D::Elem> {
        self.monomial(JetMono::sym(s), self.d.one())
    }

    pub fn monomial(&self, m: JetMono, e: D::Elem) -> JetPoly<D::Elem> {
        let mut p = JetPoly::default();
        self.insert(&mut p, m, e);
        p
    }

    /// Σ cᵢ·symᵢ + c0.
    pub fn lin(&self, terms: &[(Sym, D::Elem)], c0: D::Elem) -> JetPoly<D::Elem> {
        let mut p = self.constant(c0);
        for (s, c) in terms {
            self.insert(&mut p, JetMono::sym(*s), c.clone());
        }
        p
    }

    /// Add `c·m` into `p`, dropping the term if it cancels.
    fn insert(&self, p: &mut JetPoly<D::Elem>, m: JetMono, c: D::Elem) {
        self.insert_r(p, m, c).expect("addition into an empty slot")
    }

    fn insert_r(&self, p: &mut JetPoly<D::Elem>, m: JetMono, c: D::Elem) -> Result<()> {
        if self.d.is_zero(&c) {
            return Ok(());
        }
        match p.terms.get_mut(&m) {
            None => {
                p.terms.insert(m, c);
            }
            Some(old) => {
                let s = self.d.add(old, &c)?;
                if self.d.is_zero(&s) {
                    p.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
        }
        Ok(())
    }

    // ---- arithmetic ----

    pub fn add(&self, x: &JetPoly<D::Elem>, y: &JetPoly<D::Elem>) -> Result<JetPoly<D::Elem>> {
        let mut out = x.clone();
        for (m, c) in &y.terms {
            self.insert_r(&mut out, *m, c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, x: &JetPoly<D::Elem>, y: &JetPoly<D::Elem>) -> Result<JetPoly<D::Elem>> {
        self.add(x, &self.neg(y))
    }

    pub fn neg(&self, x: &JetPoly<D::Elem>) -> JetPoly<D::Elem> {
        JetPoly {
            terms: x.terms.iter().map(|(m, c)| (*m, self.d.neg(c))).collect(),
        }
    }

    pub fn scale(&self, x: &JetPoly<D::Elem>, k: &D::Elem) -> Result<JetPoly<D::Elem>> {
        let mut out = JetPoly::default();
        for (m, c) in &x.terms {
            self.insert_r(&mut out, *m, self.d.mul(c, k)?)?;
        }
        Ok(out)
    }

    pub fn mul(&self, x: &JetPoly<D::Elem>, y: &JetPoly<D::Elem>) -> Result<JetPoly<D::Elem>> {
        let mut out = JetPoly::default();
        for (mx, cx) in &x.terms {
            for (my, cy) in &y.terms {
                self.insert_r(&mut out, mx.mul(my)?, self.d.mul(cx, cy)?)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, x: &JetPoly<D::Elem>, e: u32) -> Result<JetPoly<D::Elem>> {
        let mut out = self.constant(self.d.one());
        for _ in 0..e {
            out = self.mul(&out, x)?;
        }
        Ok(out)
    }

    /// Coefficient conjugation together with X↔Y, X2↔Y2, C↔Cbar, W↔Wbar, P↔Pbar.
    pub fn conj(&self, x: &JetPoly<D::Elem>) -> Result<JetPoly<D::Elem>> {
        let mut out = JetPoly::default();
        for (m, c) in &x.terms {
            self.insert_r(&mut out, m.conj(), self.d.conj(c)?)?;
        }
        Ok(out)
    }

    /// True if every coefficient vanishes where the domain is anchored.
    pub fn vanishes(&self, x: &JetPoly<D::Elem>) -> bool {
        x.terms.values().all(|c| self.d.value_is_zero(c))
    }

    pub fn coeff_or_zero(&self, x: &JetPoly<D::Elem>, m: JetMono) -> D::Elem {
        x.coeff(&m).cloned().unwrap_or_else(|| self.d.zero())
    }

    /// Replace symbols by domain elements.
    pub fn substitute(&self, x: &JetPoly<D::Elem>, vals: &[(Sym, D::Elem)]) -> Result<JetPoly<D::Elem>> {
        let mut out = JetPoly::default();
        for (m, c) in &x.terms {
            let mut coeff = c.clone();
            let mut kept = *m;
            for (s, v) in vals {
                for _ in 0..m.exp(*s) {
                    coeff = self.d.mul(&coeff, v)?;
                }
                kept = kept.with(*s, 0);
            }
            self.insert_r(&mut out, kept, coeff)?;
        }
        Ok(out)
    }

    // ---- rewriting ----

    fn rule_for(&self, m: &JetMono, lvl: Level) -> Option<(JetMono, u32, &JetPoly<D::Elem>, Option<&D::Elem>)> {
        // (pattern, multiplicity, replacement polynomial, or replacement scalar)
        let pair = |a: Sym, b: Sym| {
            let k = m.exp(a).min(m.exp(b));
            (k > 0).then(|| (JetMono::ONE.with(a, 1).with(b, 1), k))
        };
        if let Some((pat, k)) = pair(Sym::C, Sym::Cbar) {
            return Some((pat, k, &self.xy_rhs, Some(&self.kappa)));
        }
        if lvl >= Level::FirstOrder {
            if let Some((pat, k)) = pair(Sym::Cbar, Sym::W) {
                return Some((pat, k, &self.cw_rhs, None));
            }
            if let Some((pat, k)) = pair(Sym::C, Sym::Wbar) {
                return Some((pat, k, &self.cw_rhs_bar, None));
            }
        }
        if lvl >= Level::Closed {
            if let Some((pat, k)) = pair(Sym::X, Sym::Y) {
                return Some((pat, k, &self.xy_rhs, None));
            }
        }
        if lvl >= Level::SecondOrder {
            for (s, rhs) in [(Sym::X2, &self.x2_rhs), (Sym::Y2, &self.y2_rhs)] {
                let k = m.exp(s);
                if k > 0 {
                    return Some((JetMono::sym(s), k, rhs, None));
                }
            }
        }
        None
    }

    /// Normal form under the rules active at `lvl`.
    pub fn reduce(&self, x: &JetPoly<D::Elem>, lvl: Level) -> Result<JetPoly<D::Elem>> {
        self.reduce_with(x, lvl, Strategy::Batched)
    }

    pub fn reduce_with(&self, x: &JetPoly<D::Elem>, lvl: Level, strat: Strategy) -> Result<JetPoly<D::Elem>> {
        // Worklist ordered by (weight, monomial); rewriting strictly lowers the
        // weight, so the largest entry has received all its contributions.
        let mut work: BTreeMap<(u32, JetMono), D::Elem> = BTreeMap::new();
        let push = |work: &mut BTreeMap<(u32, JetMono), D::Elem>, m: JetMono, c: D::Elem| -> Result<()> {
            if self.d.is_zero(&c) {
                return Ok(());
            }
            let key = (m.weight(), m);
            match work.get_mut(&key) {
                None => {
                    work.insert(key, c);
                }
                Some(old) => {
                    let s = self.d.add(old, &c)?;
                    if self.d.is_zero(&s) {
                        work.remove(&key);
                    } else {
                        *old = s;
                    }
                }
            }
            Ok(())
        };
        for (m, c) in &x.terms {
            push(&mut work, *m, c.clone())?;
        }
        let mut out = JetPoly::default();
        while let Some(((_, m), c)) = work.pop_last() {
            let Some((pat, k, rhs, scalar)) = self.rule_for(&m, lvl) else {
                out.terms.insert(m, c);
                continue;
            };
            let times = match strat {
                Strategy::Pairwise => 1,
                Strategy::Batched => k,
            };
            let mut rest = m;
            for s in Sym::ALL {
                let e = pat.exp(s) * times;
                if e > 0 {
                    rest = rest.with(s, m.exp(s) - e);
                }
            }
            let repl = match scalar {
                Some(v) => {
                    let mut acc = self.d.one();
                    for _ in 0..times {
                        acc = self.d.mul(&acc, v)?;
                    }
                    self.constant(acc)
                }
                None => self.pow(rhs, times)?,
            };
            for (rm, rc) in &repl.terms {
                push(&mut work, rest.mul(rm)?, self.d.mul(&c, rc)?)?;
            }
        }
        Ok(out)
    }

    // ---- total derivatives ----

    /// Total α-derivative. With `ik_image` set the argument is an ik·∂_β
    /// image and p1·x is added to absorb k_α = −p1 k.
    pub fn d_alpha_total(&self, x: &JetPoly<D::Elem>, ik_image: bool, lvl: Level) -> Result<JetPoly<D::Elem>> {
        let d = self.d;
        let mut out = JetPoly::default();
        for (m, c) in &x.terms {
            self.insert_r(&mut out, *m, d.diff(c, DiffVar::Alpha)?)?;
            self.insert_r(&mut out, m.mul(&JetMono::sym(Sym::X))?, d.diff(c, DiffVar::A)?)?;
            self.insert_r(&mut out, m.mul(&JetMono::sym(Sym::Y))?, d.diff(c, DiffVar::Abar)?)?;
            for s in Sym::ALL {
                let e = m.exp(s);
                if e == 0 {
                    continue;
                }
                let target = match s {
                    Sym::X => Sym::X2,
                    Sym::Y => Sym::Y2,
                    Sym::C => Sym::W,
                    Sym::Cbar => Sym::Wbar,
                    other => return Err(EngineError::UnsupportedSymbol(other.name().into())),
                };
                let nm = m.with(s, e - 1).mul(&JetMono::sym(target))?;
                self.insert_r(&mut out, nm, d.mul(c, &d.int(e as i64))?)?;
            }
        }
        if ik_image {
            out = self.add(&out, &self.scale(x, self.cat.get("p1")?)?)?;
        }
        self.reduce(&out, lvl)
    }

    /// ik·∂_β of a single symbol.
    fn d_beta_sym(&self, s: Sym, lvl: Level) -> Result<JetPoly<D::Elem>> {
        let ikab = || -> Result<&JetPoly<D::Elem>> {
            match lvl {
                Level::Base => Err(EngineError::UnsupportedSymbol("X".into())),
                Level::FirstOrder | Level::Closed => Ok(&self.ikab_first),
                Level::SecondOrder => Ok(&self.ikab_second),
            }
        };
        match s {
            Sym::X => Ok(ikab()?.clone()),
            Sym::Y => Ok(self.neg(&self.conj(ikab()?)?)),
            Sym::C => {
                // c_α + ik c_β = 2 c p3
                let two_p3 = self.d.scale(self.cat.get("p3")?, 2, 1)?;
                Ok(self.sub(
                    &self.monomial(JetMono::sym(Sym::C), two_p3),
                    &self.sym(Sym::W),
                )?)
            }
            Sym::Cbar => {
                let c = self.d_beta_sym(Sym::C, lvl)?;
                Ok(self.neg(&self.conj(&c)?))
            }
            other => Err(EngineError::UnsupportedSymbol(other.name().into())),
        }
    }

    /// ik·∂_β: a ↦ X − p2, ā ↦ −(Y − p̄2), s, c, ρ, b ↦ 0, symbols as above.
    pub fn d_beta_ik(&self, x: &JetPoly<D::Elem>, lvl: Level) -> Result<JetPoly<D::Elem>> {
        let d = self.d;
        let ik_a = self.lin(&[(Sym::X, d.one())], d.neg(self.cat.get("p2")?));
        let ik_abar = self.neg(&self.conj(&ik_a)?);
        let mut out = JetPoly::default();
        let mut sym_images: BTreeMap<Sym, JetPoly<D::Elem>> = BTreeMap::new();
        for (m, c) in &x.terms {
            let mono = self.monomial(*m, d.one());
            let da = d.diff(c, DiffVar::A)?;
            let dab = d.diff(c, DiffVar::Abar)?;
            out = self.add(&out, &self.mul(&self.scale(&mono, &da)?, &ik_a)?)?;
            out = self.add(&out, &self.mul(&self.scale(&mono, &dab)?, &ik_abar)?)?;
            for s in Sym::ALL {
                let e = m.exp(s);
                if e == 0 {
                    continue;
                }
                if !sym_images.contains_key(&s) {
                    sym_images.insert(s, self.d_beta_sym(s, lvl)?);
                }
                let rest = self.monomial(m.with(s, e - 1), d.mul(c, &d.int(e as i64))?);
                out = self.add(&out, &self.mul(&rest, &sym_images[&s])?)?;
            }
        }
        self.reduce(&out, lvl)
    }

    // ---- named right-hand sides ----

    /// X·Y → p7 X + p̄7 Y + p8.
    pub fn xy_rhs(&self) -> &JetPoly<D::Elem> {
        &self.xy_rhs
    }

    /// a_αα = p11 X² + p12 X + ½ ∂ā p2 Y + p13.
    pub fn x2_rhs(&self) -> &JetPoly<D::Elem> {
        &self.x2_rhs
    }

    /// ik a_βα = X2 + (p1 − ∂a p2) X − ∂ā p2 Y − p1 p2 − ∂α p2.
    pub fn ikab_first(&self) -> &JetPoly<D::Elem> {
        &self.ikab_first
    }

    /// ik a_βα = p11 X² + p14 X − ½ ∂ā p2 Y + p15.
    pub fn ikab_second(&self) -> &JetPoly<D::Elem> {
        &self.ikab_second
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, Catalog};
    use crate::domain::Symbolic;
    use std::sync::OnceLock;

    fn cat() -> &'static Catalog<Symbolic> {
        static C: OnceLock<Catalog<Symbolic>> = OnceLock::new();
        C.get_or_init(|| catalog::symbolic().unwrap())
    }

    fn same(j: &JetCtx<Symbolic>, x: &JetPoly<TrigRational>, y: &JetPoly<TrigRational>) -> bool {
        j.sub(x, y).unwrap().is_empty()
    }

    #[test]
    fn xy_rule() {
        let j = JetCtx::new(&Symbolic, cat()).unwrap();
        let xy = j.monomial(JetMono::ONE.with(Sym::X, 1).with(Sym::Y, 1), TrigRational::one());
        let r = j.reduce(&xy, Level::Closed).unwrap();
        assert!(same(&j, &r, j.xy_rhs()));
        assert!(same(&j, &j.reduce(&xy, Level::FirstOrder).unwrap(), &xy));
    }

    #[test]
    fn xy_squared_rule() {
        // X·Y² = p7² X + p̄7 Y² + (p7 p̄7 + p8) Y + p7 p8
        let j = JetCtx::new(&Symbolic, cat()).unwrap();
        let m = j.monomial(JetMono::ONE.with(Sym::X, 1).with(Sym::Y, 2), TrigRational::one());
        let r = j.reduce(&m, Level::Closed).unwrap();
        let p7 = cat().get("p7").unwrap();
        let p7b = p7.conjugate();
        let p8 = cat().get("p8").unwrap();
        let mut want = j.lin(
            &[
                (Sym::X, p7.mul(p7).unwrap()),
                (Sym::Y, p7.mul(&p7b).unwrap().add(p8).unwrap()),
            ],
            p7.mul(p8).unwrap(),
        );
        want = j.add(&want, &j.monomial(JetMono::ONE.with(Sym::Y, 2), p7b)).unwrap();
        assert!(same(&j, &r, &want));
    }

    #[test]
    fn strategies_agree_on_x2y2() {
        let j = JetCtx::new(&Symbolic, cat()).unwrap();
        let m = j.monomial(JetMono::ONE.with(Sym::X, 2).with(Sym::Y, 2), TrigRational::one());
        let a = j.reduce_with(&m, Level::Closed, Strategy::Pairwise).unwrap();
        let b = j.reduce_with(&m, Level::Closed, Strategy::Batched).unwrap();
        assert!(same(&j, &a, &b));
        assert!(a.terms().all(|(m, _)| m.exp(Sym::X) == 0 || m.exp(Sym::Y) == 0));
    }

    #[test]
    fn d_alpha_total_basics() {
        let j = JetCtx::new(&Symbolic, cat()).unwrap();
        let a = j.constant(TrigRational::var(Var::A));
        assert!(same(&j, &j.d_alpha_total(&a, false, Level::Base).unwrap(), &j.sym(Sym::X)));
        let circle = j.constant(
            TrigRational::var(Var::S)
                .pow(2)
                .unwrap()
                .add(&TrigRational::var(Var::C).pow(2).unwrap())
                .unwrap(),
        );
        assert!(j.d_alpha_total(&circle, false, Level::Base).unwrap().is_empty());
    }

    #[test]
    fn d_alpha_of_xy_relation_has_second_order_coefficients() {
        let j = JetCtx::new(&Symbolic, cat()).unwrap();
        let xy = j.monomial(JetMono::ONE.with(Sym::X, 1).with(Sym::Y, 1), TrigRational::one());
        let e = j.sub(j.xy_rhs(), &xy).unwrap();
        let r = j.d_alpha_total(&e, false, Level::FirstOrder).unwrap();
        let p7 = cat().get("p7").unwrap();
        // coefficient of X2 is p7 − Y, of Y2 is p̄7 − X
        assert!(j.coeff_or_zero(&r, JetMono::sym(Sym::X2)).equals(p7).unwrap());
        let x2y = JetMono::ONE.with(Sym::X2, 1).with(Sym::Y, 1);
        assert!(j.coeff_or_zero(&r, x2y).equals(&TrigRational::from_int(-1)).unwrap());
        let y2x = JetMono::ONE.with(Sym::Y2, 1).with(Sym::X, 1);
        assert!(j.coeff_or_zero(&r, y2x).equals(&TrigRational::from_int(-1)).unwrap());
    }

    #[test]
    fn d_beta_ik_basics() {
        let j = JetCtx::new(&Symbolic, cat()).unwrap();
        let p2 = cat().get("p2").unwrap();
        let a = j.constant(TrigRational::var(Var::A));
        let want = j.lin(&[(Sym::X, TrigRational::one())], p2.neg());
        assert!(same(&j, &j.d_beta_ik(&a, Level::FirstOrder).unwrap(), &want));
        let rho = j.constant(TrigRational::var(Var::Rho));
        assert!(j.d_beta_ik(&rho, Level::FirstOrder).unwrap().is_empty());
        // a·ā ↦ ā(X − p2) − a(Y − p̄2)
        let aab = j.constant(TrigRational::var(Var::A).mul(&TrigRational::var(Var::Abar)).unwrap());
        let abar = TrigRational::var(Var::Abar);
        let a_ = TrigRational::var(Var::A);
        let want = j.lin(
            &[(Sym::X, abar.clone()), (Sym::Y, a_.neg())],
            abar.mul(&p2.neg()).unwrap().add(&a_.mul(&p2.conjugate()).unwrap()).unwrap(),
        );
        assert!(same(&j, &j.d_beta_ik(&aab, Level::FirstOrder).unwrap(), &want));
    }

    #[test]
    fn unsupported_symbols() {
        let j = JetCtx::new(&Symbolic, cat()).unwrap();
        let w = j.sym(Sym::W);
        assert!(matches!(j.d_alpha_total(&w, false, Level::FirstOrder), Err(EngineError::UnsupportedSymbol(_))));
        assert!(matches!(j.d_beta_ik(&w, Level::FirstOrder), Err(EngineError::UnsupportedSymbol(_))));
        assert!(matches!(j.d_beta_ik(&j.sym(Sym::X), Level::Base), Err(EngineError::UnsupportedSymbol(_))));
    }
}
