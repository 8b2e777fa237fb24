//! Sparse multivariate polynomials reduced modulo s² + c² − 1.
//!
//! Every constructor leaves the polynomial in canonical form: terms sorted
//! by descending [`Monomial`], no zero coefficients, and the exponent of c
//! at most one (c² is rewritten to 1 − s²).

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use super::monomial::{Monomial, Var};
use super::rational::{Coeff, GaussianRational};
use crate::error::{EngineError, Result};

/// Default ceiling on the number of terms of any intermediate polynomial.
pub const DEFAULT_TERM_BUDGET: usize = 5_000_000;

thread_local! {
    static TERM_BUDGET: Cell<usize> = const { Cell::new(DEFAULT_TERM_BUDGET) };
}

pub fn term_budget() -> usize {
    TERM_BUDGET.with(|b| b.get())
}

/// Run `f` with a different term budget on this thread.
pub fn with_term_budget<T>(budget: usize, f: impl FnOnce() -> T) -> T {
    let prev = TERM_BUDGET.with(|b| b.replace(budget));
    let out = f();
    TERM_BUDGET.with(|b| b.set(prev));
    out
}

fn check_budget(terms: usize) -> Result<()> {
    let budget = term_budget();
    if terms > budget {
        Err(EngineError::ReductionOverflow { terms, budget })
    } else {
        Ok(())
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<C: Coeff> {
    terms: Vec<(Monomial, C)>,
}

pub type Poly = Polynomial<GaussianRational>;

/// Accumulator for building canonical polynomials term by term.
struct Acc<C: Coeff> {
    map: FxHashMap<Monomial, C>,
}

impl<C: Coeff> Acc<C> {
    fn with_capacity(n: usize) -> Self {
        let mut map = FxHashMap::default();
        map.reserve(n);
        Acc { map }
    }

    #[inline]
    fn add(&mut self, m: Monomial, c: C) {
        if m.exp(Var::C) >= 2 {
            // c^j = c^(j-2) (1 - s^2)
            let base = m.lower(Var::C).lower(Var::C);
            let shifted = base
                .mul(Monomial::var(Var::S).mul_unchecked(Monomial::var(Var::S)))
                .expect("degree preserved by c^2 -> s^2");
            self.add(shifted, c.neg());
            self.add(base, c);
            return;
        }
        match self.map.get_mut(&m) {
            Some(e) => e.add_assign(&c),
            None => {
                self.map.insert(m, c);
            }
        }
    }

    fn len(&self) -> usize {
        self.map.len()
    }

    fn finish(self) -> Polynomial<C> {
        let mut terms: Vec<(Monomial, C)> =
            self.map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        Polynomial { terms }
    }
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial {
                terms: vec![(Monomial::ONE, c)],
            }
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn var(v: Var) -> Self {
        Polynomial {
            terms: vec![(Monomial::var(v), C::one())],
        }
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        Self::from_terms(vec![(m, c)])
    }

    /// Canonicalize an arbitrary list of terms (duplicates, zeros, c² allowed).
    pub fn from_terms(terms: Vec<(Monomial, C)>) -> Self {
        let mut acc = Acc::with_capacity(terms.len());
        for (m, c) in terms {
            acc.add(m, c);
        }
        acc.finish()
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// Constant term (zero if absent).
    pub fn constant_term(&self) -> C {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => C::zero(),
        }
    }

    pub fn lead(&self) -> Option<(Monomial, &C)> {
        self.terms.first().map(|(m, c)| (*m, c))
    }

    pub fn degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.degree())
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    pub fn is_c_free(&self) -> bool {
        !self.contains_var(Var::C)
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, c.mul(k))).collect(),
        }
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Result<Self> {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&self.terms, &other.terms);
        while i < x.len() && j < y.len() {
            match x[i].0.cmp(&y[j].0) {
                Ordering::Greater => {
                    out.push(x[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate_other { y[j].1.neg() } else { y[j].1.clone() };
                    out.push((y[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        x[i].1.sub(&y[j].1)
                    } else {
                        x[i].1.add(&y[j].1)
                    };
                    if !c.is_zero() {
                        out.push((x[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(x[i..].iter().cloned());
        for t in &y[j..] {
            let c = if negate_other { t.1.neg() } else { t.1.clone() };
            out.push((t.0, c));
        }
        check_budget(out.len())?;
        Ok(Polynomial { terms: out })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.merge(other, true)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        if self.degree() + other.degree() > Monomial::MAX_DEGREE {
            return Err(EngineError::ExponentOverflow);
        }
        if self.is_constant() {
            return Ok(other.scale(&self.terms[0].1));
        }
        if other.is_constant() {
            return Ok(self.scale(&other.terms[0].1));
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let budget = term_budget();
        let mut acc = Acc::with_capacity(large.len().saturating_mul(2).min(budget));
        for (m1, c1) in &small.terms {
            for (m2, c2) in &large.terms {
                acc.add(m1.mul_unchecked(*m2), c1.mul(c2));
            }
            if acc.len() > budget {
                return Err(EngineError::ReductionOverflow {
                    terms: acc.len(),
                    budget,
                });
            }
        }
        Ok(acc.finish())
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Partial derivative with respect to a ring variable (no chain rule).
    pub fn partial(&self, v: Var) -> Self {
        let mut acc = Acc::with_capacity(self.len());
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            acc.add(m.lower(v), c.mul(&C::from_int(e as i64)));
        }
        acc.finish()
    }

    /// d/dα with s' = c and c' = −s, reduced again.
    pub fn d_alpha(&self) -> Self {
        let mut acc = Acc::with_capacity(2 * self.len());
        for (m, c) in &self.terms {
            let es = m.exp(Var::S);
            let ec = m.exp(Var::C);
            if es > 0 {
                // s^i -> i s^(i-1) c
                let mm = m.lower(Var::S).mul_unchecked(Monomial::var(Var::C));
                acc.add(mm, c.mul(&C::from_int(es as i64)));
            }
            if ec > 0 {
                // c^j -> -j c^(j-1) s
                let mm = m.lower(Var::C).mul_unchecked(Monomial::var(Var::S));
                acc.add(mm, c.mul(&C::from_int(-(ec as i64))));
            }
        }
        acc.finish()
    }

    /// Exchange a and ā without touching coefficients.
    pub fn swap_a(&self) -> Self {
        let mut terms: Vec<_> = self.terms.iter().map(|(m, c)| (m.swap_a(), c.clone())).collect();
        terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        Polynomial { terms }
    }

    /// Swap a ↔ ā and conjugate every coefficient.
    pub fn conj(&self) -> Self {
        let mut terms: Vec<_> = self.terms.iter().map(|(m, c)| (m.swap_a(), c.conj())).collect();
        terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        Polynomial { terms }
    }

    /// Total structural order, used to sort denominator factors.
    pub fn structural_cmp(&self, other: &Self) -> Ordering {
        self.terms.len().cmp(&other.terms.len()).then_with(|| {
            for (x, y) in self.terms.iter().zip(&other.terms) {
                let o = x.0.cmp(&y.0).then_with(|| x.1.structural_cmp(&y.1));
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }

    /// Split `P = P0 + c·P1` with both parts free of c.
    pub fn split_c(&self) -> (Self, Self) {
        let mut p0 = Vec::new();
        let mut p1 = Vec::new();
        for (m, c) in &self.terms {
            if m.exp(Var::C) == 0 {
                p0.push((*m, c.clone()));
            } else {
                p1.push((m.lower(Var::C), c.clone()));
            }
        }
        p1.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        (Polynomial { terms: p0 }, Polynomial { terms: p1 })
    }

    fn join_c(p0: Self, p1: Self) -> Self {
        let mut terms = p0.terms;
        terms.extend(
            p1.terms
                .into_iter()
                .map(|(m, c)| (m.mul_unchecked(Monomial::var(Var::C)), c)),
        );
        terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        Polynomial { terms }
    }

    /// Exact quotient `self / f` for a c-free divisor `f`, or `None` if `f`
    /// does not divide `self`.
    pub fn div_exact(&self, f: &Self) -> Option<Self> {
        assert!(f.is_c_free(), "div_exact needs a divisor free of cos(alpha)");
        if f.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if f.is_constant() {
            return Some(self.scale(&f.terms[0].1.inv()?));
        }
        if self.is_c_free() {
            return div_exact_plain(&self.terms, f).map(|terms| Polynomial { terms });
        }
        let (p0, p1) = self.split_c();
        let q0 = div_exact_plain(&p0.terms, f)?;
        let q1 = div_exact_plain(&p1.terms, f)?;
        Some(Self::join_c(Polynomial { terms: q0 }, Polynomial { terms: q1 }))
    }

    /// Make the leading coefficient one; returns the factor pulled out.
    pub fn make_monic(&self) -> (C, Self) {
        match self.lead() {
            None => (C::zero(), Self::zero()),
            Some((_, lc)) => {
                let lc = lc.clone();
                let inv = lc.inv().expect("nonzero leading coefficient");
                (lc, self.scale(&inv))
            }
        }
    }

    /// Substitute values for some variables; `None` keeps the variable.
    pub fn substitute<K: Coeff>(
        &self,
        vals: &[Option<K>; 6],
        lift: impl Fn(&C) -> K,
    ) -> Polynomial<K> {
        let mut cache: [Vec<K>; 6] = Default::default();
        let mut acc: Acc<K> = Acc::with_capacity(16);
        for (m, c) in &self.terms {
            let mut coeff = lift(c);
            let mut kept = [0u32; 6];
            for v in Var::ALL {
                let e = m.exp(v) as usize;
                if e == 0 {
                    continue;
                }
                match &vals[v.index()] {
                    None => kept[v.index()] = e as u32,
                    Some(x) => {
                        let pows = &mut cache[v.index()];
                        if pows.is_empty() {
                            pows.push(K::one());
                        }
                        while pows.len() <= e {
                            let next = pows.last().unwrap().mul(x);
                            pows.push(next);
                        }
                        coeff = coeff.mul(&pows[e]);
                    }
                }
            }
            if coeff.is_zero() {
                continue;
            }
            acc.add(Monomial::from_exponents(kept).expect("degree bounded by source"), coeff);
        }
        acc.finish()
    }

    /// Evaluate at a full assignment of the six variables.
    pub fn eval<K: Coeff>(&self, vals: &[K; 6], lift: impl Fn(&C) -> K) -> K {
        let opts: [Option<K>; 6] = std::array::from_fn(|i| Some(vals[i].clone()));
        self.substitute(&opts, lift).constant_term()
    }

    pub fn map_coeffs<K: Coeff>(&self, f: impl Fn(&C) -> K) -> Polynomial<K> {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))).collect())
    }
}

/// Heap-driven exact division of a c-free sorted term list by c-free `f`.
fn div_exact_plain<C: Coeff>(n: &[(Monomial, C)], f: &Polynomial<C>) -> Option<Vec<(Monomial, C)>> {
    if n.is_empty() {
        return Some(Vec::new());
    }
    let (lm, lc) = f.lead()?;
    // Cheap rejection: every monomial of the quotient times lm is a monomial of
    // some remainder; the leading one must be divisible.
    if !lm.divides(n[0].0) || n[0].0.degree() < f.degree() {
        return None;
    }
    let lc_inv = lc.inv()?;
    let mut rem: FxHashMap<Monomial, C> = FxHashMap::default();
    rem.reserve(n.len());
    let mut heap: BinaryHeap<Monomial> = BinaryHeap::with_capacity(n.len());
    for (m, c) in n {
        rem.insert(*m, c.clone());
        heap.push(*m);
    }
    let mut q: Vec<(Monomial, C)> = Vec::new();
    while let Some(m) = heap.pop() {
        let Some(cm) = rem.remove(&m) else { continue };
        if cm.is_zero() {
            continue;
        }
        let t = lm.quotient_of(m)?;
        let tc = cm.mul(&lc_inv);
        for (fm, fc) in f.terms.iter().skip(1) {
            let mm = t.mul_unchecked(*fm);
            let delta = tc.mul(fc);
            match rem.get_mut(&mm) {
                Some(e) => e.sub_assign(&delta),
                None => {
                    rem.insert(mm, delta.neg());
                    heap.push(mm);
                }
            }
        }
        q.push((t, tc));
    }
    Some(q)
}

impl Poly {
    pub fn from_int(n: i64) -> Self {
        Self::constant(GaussianRational::from_int(n))
    }

    pub fn s() -> Self {
        Self::var(Var::S)
    }
    pub fn c() -> Self {
        Self::var(Var::C)
    }
    pub fn a() -> Self {
        Self::var(Var::A)
    }
    pub fn abar() -> Self {
        Self::var(Var::Abar)
    }
    pub fn rho() -> Self {
        Self::var(Var::Rho)
    }
    pub fn b() -> Self {
        Self::var(Var::B)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[([u32; 6], i64)]) -> Poly {
        Poly::from_terms(
            terms
                .iter()
                .map(|(e, c)| (Monomial::from_exponents(*e).unwrap(), GaussianRational::from_int(*c)))
                .collect(),
        )
    }

    #[test]
    fn c_squared_rewrites() {
        let c2 = Poly::c().mul(&Poly::c()).unwrap();
        let expect = Poly::one().sub(&Poly::s().pow(2).unwrap()).unwrap();
        assert_eq!(c2, expect);
        let pyth = Poly::s().pow(2).unwrap().add(&c2).unwrap().sub(&Poly::one()).unwrap();
        assert!(pyth.is_zero());
    }

    #[test]
    fn alpha_derivative_kills_ideal_generator() {
        let g = p(&[([2, 0, 0, 0, 0, 0], 1), ([0, 0, 0, 0, 0, 0], -1)])
            .add(&Poly::c().pow(2).unwrap())
            .unwrap();
        assert!(g.is_zero());
        let s2 = Poly::s().pow(2).unwrap();
        // d/dα s^2 = 2 s c
        assert_eq!(s2.d_alpha(), p(&[([1, 1, 0, 0, 0, 0], 2)]));
    }

    #[test]
    fn exact_division() {
        let apb = Poly::a().add(&Poly::b()).unwrap();
        let amb = Poly::a().sub(&Poly::b()).unwrap();
        let prod = apb.mul(&amb).unwrap().mul(&Poly::c()).unwrap();
        let q = prod.div_exact(&apb).unwrap();
        assert_eq!(q, amb.mul(&Poly::c()).unwrap());
        assert!(amb.div_exact(&apb).is_none());
        assert!(Poly::s().div_exact(&apb).is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let x = Poly::a().add(&Poly::b()).unwrap().add(&Poly::rho()).unwrap();
        let r = with_term_budget(10, || x.pow(6));
        assert!(matches!(r, Err(EngineError::ReductionOverflow { .. })));
        assert!(x.pow(6).is_ok());
    }
}
