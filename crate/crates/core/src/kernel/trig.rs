//! Rational functions over the quotient ring, with a factored denominator.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::monomial::{Monomial, Var};
use super::poly::Poly;
use super::rational::{Coeff, GaussianRational};
use crate::error::{EngineError, Result};

/// Differentiation variables visible to callers.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum DiffVar {
    Alpha,
    A,
    Abar,
}

impl DiffVar {
    pub fn name(self) -> &'static str {
        match self {
            DiffVar::Alpha => "alpha",
            DiffVar::A => "a",
            DiffVar::Abar => "abar",
        }
    }

    /// The variable that plays this role after a ↔ ā.
    pub fn swapped(self) -> DiffVar {
        match self {
            DiffVar::Alpha => DiffVar::Alpha,
            DiffVar::A => DiffVar::Abar,
            DiffVar::Abar => DiffVar::A,
        }
    }
}

/// A monic denominator factor with multiplicity.
#[derive(Clone, Debug)]
pub struct Factor {
    pub poly: Arc<Poly>,
    pub exp: u32,
}

impl PartialEq for Factor {
    fn eq(&self, o: &Self) -> bool {
        self.exp == o.exp && (Arc::ptr_eq(&self.poly, &o.poly) || *self.poly == *o.poly)
    }
}

fn same_poly(x: &Arc<Poly>, y: &Arc<Poly>) -> bool {
    Arc::ptr_eq(x, y) || **x == **y
}

/// The small polynomials that every catalog denominator is built from.
fn factor_basis() -> &'static [Arc<Poly>] {
    static BASIS: OnceLock<Vec<Arc<Poly>>> = OnceLock::new();
    BASIS.get_or_init(|| {
        let s = Poly::s();
        let c = Poly::c();
        let a = Poly::a();
        let ab = Poly::abar();
        let b = Poly::b();
        let third = GaussianRational::from_ratio(2, 3);
        vec![
            s.clone(),
            c,
            a.add(&b).unwrap(),
            ab.add(&b).unwrap(),
            a.sub(&b).unwrap(),
            ab.sub(&b).unwrap(),
            s.mul(&s).unwrap().sub(&Poly::constant(third)).unwrap(),
            Poly::rho(),
        ]
        .into_iter()
        .map(Arc::new)
        .collect()
    })
}

/// Divide `n` by `f` in the quotient ring if the quotient is a polynomial.
///
/// Only c-free divisors and `c` itself are supported; anything else reports
/// "not divisible", which is always safe.
pub(crate) fn try_divide(n: &Poly, f: &Poly) -> Option<Poly> {
    if f.is_c_free() {
        if f.degree() > n.degree() {
            return None;
        }
        return n.div_exact(f);
    }
    if *f == Poly::c() {
        // n = n0 + c n1 is divisible by c iff (1 - s^2) | n0; then n / c = n1 + c n0/(1 - s^2).
        let (n0, n1) = n.split_c();
        let one_minus_s2 = Poly::one().sub(&Poly::s().pow(2).ok()?).ok()?;
        let q0 = n0.div_exact(&one_minus_s2)?;
        return n1.add(&q0.mul(&Poly::c()).ok()?).ok();
    }
    None
}

/// A ratio `num / ∏ fᵢ^eᵢ` with monic, pairwise distinct factors `fᵢ`.
///
/// Every scalar lives in the numerator. Factors are kept sorted by a fixed
/// structural order so that two values built the same way compare equal
/// without multiplying anything out.
#[derive(Clone, Debug)]
pub struct TrigRational {
    num: Poly,
    den: Vec<Factor>,
}

impl TrigRational {
    pub fn zero() -> Self {
        TrigRational {
            num: Poly::zero(),
            den: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        TrigRational {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn constant(q: GaussianRational) -> Self {
        Self::from_poly(Poly::constant(q))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(GaussianRational::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(GaussianRational::from_ratio(n, d))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(Poly::var(v))
    }

    /// Build `num / den`, normalizing both.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(EngineError::ZeroDenominator);
        }
        Self::from_poly(num).div(&Self::from_poly(den))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den_factors(&self) -> &[Factor] {
        &self.den
    }

    /// The expanded denominator (monic) and the numerator rescaled to match.
    pub fn to_fraction(&self) -> Result<(Poly, Poly)> {
        let mut den = Poly::one();
        for f in &self.den {
            den = den.mul(&f.poly.pow(f.exp)?)?;
        }
        let (lc, den) = den.make_monic();
        let num = self.num.scale(&lc.inv().expect("nonzero denominator"));
        Ok((num, den))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// Total number of stored terms, numerator plus denominator factors.
    pub fn term_count(&self) -> usize {
        self.num.len() + self.den.iter().map(|f| f.poly.len()).sum::<usize>()
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.den.is_empty() && self.num.is_constant() {
            Some(self.num.constant_term())
        } else {
            None
        }
    }

    fn canonical(num: Poly, den: Vec<Factor>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        TrigRational { num, den }
    }

    /// Split a polynomial into a scalar, known basis factors and a monic rest.
    fn factorize(p: &Poly) -> (GaussianRational, Vec<Factor>) {
        let mut rest = p.clone();
        let mut out: Vec<Factor> = Vec::new();
        for f in factor_basis() {
            let mut e = 0;
            while !rest.is_constant() {
                match try_divide(&rest, f) {
                    Some(q) => {
                        rest = q;
                        e += 1;
                    }
                    None => break,
                }
            }
            if e > 0 {
                out.push(Factor {
                    poly: f.clone(),
                    exp: e,
                });
            }
        }
        let (lc, monic) = rest.make_monic();
        if !monic.is_constant() {
            out.push(Factor {
                poly: Arc::new(monic),
                exp: 1,
            });
        }
        (lc, out)
    }

    /// Merge two factor lists, adding exponents.
    fn merge_factors(x: &[Factor], y: &[Factor]) -> Vec<Factor> {
        let mut out: Vec<Factor> = x.to_vec();
        for f in y {
            match out.iter_mut().find(|g| same_poly(&g.poly, &f.poly)) {
                Some(g) => g.exp += f.exp,
                None => out.push(f.clone()),
            }
        }
        out
    }

    fn sort_factors(den: &mut Vec<Factor>) {
        den.retain(|f| f.exp > 0);
        den.sort_by(|x, y| x.poly.structural_cmp(&y.poly));
    }

    /// Cancel factors of `den` out of `num` as far as trial division allows.
    fn cancel(mut num: Poly, mut den: Vec<Factor>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        for f in den.iter_mut() {
            while f.exp > 0 && !num.is_constant() {
                match try_divide(&num, &f.poly) {
                    Some(q) => {
                        num = q;
                        f.exp -= 1;
                    }
                    None => break,
                }
            }
        }
        Self::sort_factors(&mut den);
        Self::canonical(num, den)
    }

    /// Least common multiple of the two denominators, with the cofactors
    /// `L / D1` and `L / D2` as factor lists.
    fn lcm(x: &[Factor], y: &[Factor]) -> (Vec<Factor>, Vec<Factor>, Vec<Factor>) {
        let mut l: Vec<Factor> = x.to_vec();
        let mut cx: Vec<Factor> = Vec::new();
        let mut cy: Vec<Factor> = Vec::new();
        for f in y {
            match l.iter_mut().find(|g| same_poly(&g.poly, &f.poly)) {
                Some(g) => match g.exp.cmp(&f.exp) {
                    Ordering::Less => {
                        cx.push(Factor {
                            poly: f.poly.clone(),
                            exp: f.exp - g.exp,
                        });
                        g.exp = f.exp;
                    }
                    Ordering::Greater => cy.push(Factor {
                        poly: f.poly.clone(),
                        exp: g.exp - f.exp,
                    }),
                    Ordering::Equal => {}
                },
                None => {
                    l.push(f.clone());
                    cx.push(f.clone());
                }
            }
        }
        for g in x {
            if !y.iter().any(|f| same_poly(&f.poly, &g.poly)) {
                cy.push(g.clone());
            }
        }
        (l, cx, cy)
    }

    fn expand(fs: &[Factor]) -> Result<Poly> {
        let mut p = Poly::one();
        for f in fs {
            p = p.mul(&f.poly.pow(f.exp)?)?;
        }
        Ok(p)
    }

    fn add_sub(&self, o: &Self, negate: bool) -> Result<Self> {
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(if negate { o.neg() } else { o.clone() });
        }
        let (l, cx, cy) = Self::lcm(&self.den, &o.den);
        let n1 = self.num.mul(&Self::expand(&cx)?)?;
        let n2 = o.num.mul(&Self::expand(&cy)?)?;
        let num = if negate { n1.sub(&n2)? } else { n1.add(&n2)? };
        if cx.is_empty() && cy.is_empty() && l.is_empty() {
            return Ok(Self::canonical(num, l));
        }
        Ok(Self::cancel(num, l))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.add_sub(o, false)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add_sub(o, true)
    }

    pub fn neg(&self) -> Self {
        TrigRational {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        Self::canonical(self.num.scale(k), self.den.clone())
    }

    /// Cancel the factors of `den` against `num`, returning what is left of both.
    fn cross_cancel(num: &Poly, den: &[Factor]) -> (Poly, Vec<Factor>) {
        let r = Self::cancel(num.clone(), den.to_vec());
        (r.num, r.den)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero());
        }
        if let Some(k) = o.as_constant() {
            return Ok(self.scale(&k));
        }
        if let Some(k) = self.as_constant() {
            return Ok(o.scale(&k));
        }
        let (n1, d2) = Self::cross_cancel(&self.num, &o.den);
        let (n2, d1) = Self::cross_cancel(&o.num, &self.den);
        let num = n1.mul(&n2)?;
        let mut den = Self::merge_factors(&d1, &d2);
        Self::sort_factors(&mut den);
        Ok(Self::canonical(num, den))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(EngineError::ZeroDenominator);
        }
        let (lc, mut fs) = Self::factorize(&self.num);
        let num = Self::expand(&self.den)?.scale(&lc.inv().expect("nonzero"));
        // The old denominator's factors may reappear in the new one.
        let mut merged: Vec<Factor> = Vec::new();
        for f in fs.drain(..) {
            match merged.iter_mut().find(|g| same_poly(&g.poly, &f.poly)) {
                Some(g) => g.exp += f.exp,
                None => merged.push(f),
            }
        }
        Ok(Self::cancel(num, merged))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(EngineError::ZeroDenominator);
        }
        if let Some(k) = o.as_constant() {
            return Ok(self.scale(&k.inv().expect("nonzero")));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        // n1/d1 ÷ n2/d2: factor n2 first so shared factors cancel cheaply.
        let (lc, fs) = Self::factorize(&o.num);
        let (n1, fs) = Self::cross_cancel(&self.num, &fs);
        // Only the parts of d1 and d2 not shared with each other survive.
        // lcm(d1, d2) yields L/d1 (what d2 has beyond d1) and L/d2.
        let (_, d2_only, d1_only) = Self::lcm(&self.den, &o.den);
        let num = n1
            .mul(&Self::expand(&d2_only)?)?
            .scale(&lc.inv().expect("nonzero"));
        let mut den = Self::merge_factors(&fs, &d1_only);
        Self::sort_factors(&mut den);
        Ok(Self::cancel(num, den))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    fn map_factors(&self, f: impl Fn(&Poly) -> Poly) -> Result<Self> {
        let num = f(&self.num);
        let mut den: Vec<Factor> = Vec::new();
        let mut scale = GaussianRational::one();
        for fac in &self.den {
            let (lc, monic) = f(&fac.poly).make_monic();
            let reused = factor_basis()
                .iter()
                .find(|b| ***b == monic)
                .cloned()
                .unwrap_or_else(|| Arc::new(monic));
            scale = Coeff::mul(&scale, &lc.pow(fac.exp));
            den.push(Factor {
                poly: reused,
                exp: fac.exp,
            });
        }
        let num = num.scale(&scale.inv().expect("nonzero"));
        Self::sort_factors(&mut den);
        Ok(Self::canonical(num, den))
    }

    /// Swap a ↔ ā and conjugate every coefficient.
    pub fn conjugate(&self) -> Self {
        self.map_factors(|p| p.conj()).expect("conjugation does not grow terms")
    }

    /// Swap a ↔ ā only.
    pub fn swap_a(&self) -> Self {
        self.map_factors(|p| p.swap_a()).expect("swap does not grow terms")
    }

    fn poly_diff(p: &Poly, v: DiffVar) -> Poly {
        match v {
            DiffVar::Alpha => p.d_alpha(),
            DiffVar::A => p.partial(Var::A),
            DiffVar::Abar => p.partial(Var::Abar),
        }
    }

    pub fn differentiate(&self, v: DiffVar) -> Result<Self> {
        let dn = Self::poly_diff(&self.num, v);
        let moving: Vec<(usize, Poly)> = self
            .den
            .iter()
            .enumerate()
            .map(|(i, f)| (i, Self::poly_diff(&f.poly, v)))
            .filter(|(_, d)| !d.is_zero())
            .collect();
        if moving.is_empty() {
            return Ok(Self::canonical(dn, self.den.clone()));
        }
        // d(N / ∏ fᵢ^eᵢ) = (N' ∏ fᵢ − N Σ eᵢ fᵢ' ∏_{j≠i} fⱼ) / ∏ fᵢ^(eᵢ+1),
        // the products running over factors that actually depend on v.
        let mut prod_all = Poly::one();
        for (i, _) in &moving {
            prod_all = prod_all.mul(&self.den[*i].poly)?;
        }
        let mut num = dn.mul(&prod_all)?;
        for (k, (i, df)) in moving.iter().enumerate() {
            let mut term = self.num.mul(df)?.scale(&GaussianRational::from_int(self.den[*i].exp as i64));
            for (k2, (j, _)) in moving.iter().enumerate() {
                if k2 != k {
                    term = term.mul(&self.den[*j].poly)?;
                }
            }
            num = num.sub(&term)?;
        }
        let mut den = self.den.clone();
        for (i, _) in &moving {
            den[*i].exp += 1;
        }
        Ok(Self::cancel(num, den))
    }

    /// Exact equality in the fraction field of the quotient ring.
    pub fn equals(&self, o: &Self) -> Result<bool> {
        if self.den == o.den {
            return Ok(self.num == o.num);
        }
        let (_, cx, cy) = Self::lcm(&self.den, &o.den);
        let lhs = self.num.mul(&Self::expand(&cx)?)?;
        let rhs = o.num.mul(&Self::expand(&cy)?)?;
        Ok(lhs == rhs)
    }

    /// Substitute values for the six ring variables and evaluate.
    pub fn eval_at<K: Coeff>(&self, vals: &[K; 6]) -> Result<K> {
        let lift = |q: &GaussianRational| K::from_gaussian(q);
        let mut den = K::one();
        for f in &self.den {
            let v = f.poly.eval(vals, lift);
            if v.is_zero() {
                return Err(EngineError::PoleAtPoint);
            }
            for _ in 0..f.exp {
                den = den.mul(&v);
            }
        }
        let num = self.num.eval(vals, lift);
        Ok(num.mul(&den.inv().ok_or(EngineError::PoleAtPoint)?))
    }

    /// Substitute for a subset of variables, keeping the rest symbolic.
    pub fn substitute(&self, vals: &[Option<GaussianRational>; 6]) -> Result<Self> {
        let id = |q: &GaussianRational| q.clone();
        let num = self.num.substitute(vals, id);
        let mut out = Self::from_poly(num);
        for f in &self.den {
            let d = Self::from_poly(f.poly.substitute(vals, id));
            if d.is_zero() {
                return Err(EngineError::PoleAtPoint);
            }
            out = out.div(&d.pow(f.exp as i32)?)?;
        }
        Ok(out)
    }

    /// Rebuild the canonical form from the expanded fraction.
    pub fn normalize(&self) -> Result<Self> {
        let (n, d) = self.to_fraction()?;
        Self::new(n, d)
    }

    pub fn structural_eq(&self, o: &Self) -> bool {
        self.num == o.num && self.den == o.den
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.num.terms().iter().map(|(m, _)| *m)
    }
}

impl Default for TrigRational {
    fn default() -> Self {
        TrigRational::zero()
    }
}

impl PartialEq for TrigRational {
    /// Structural equality of canonical forms; see [`TrigRational::equals`]
    /// for mathematical equality.
    fn eq(&self, o: &Self) -> bool {
        self.structural_eq(o)
    }
}

impl fmt::Display for TrigRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::lang::render::render(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: Var) -> TrigRational {
        TrigRational::var(x)
    }

    #[test]
    fn difference_of_squares_equals() {
        let a = v(Var::A);
        let b = v(Var::B);
        let q = a
            .mul(&a)
            .unwrap()
            .sub(&b.mul(&b).unwrap())
            .unwrap()
            .div(&a.add(&b).unwrap())
            .unwrap();
        assert!(q.equals(&a.sub(&b).unwrap()).unwrap());
    }

    #[test]
    fn content_cancels() {
        let two = TrigRational::from_int(2);
        let n = v(Var::A).mul(&two).unwrap().add(&v(Var::B).mul(&two).unwrap()).unwrap();
        let q = n.div(&two).unwrap();
        assert!(q.is_polynomial());
        assert_eq!(q.num(), &Poly::a().add(&Poly::b()).unwrap());
    }

    #[test]
    fn cot_derivative() {
        let cot = v(Var::C).div(&v(Var::S)).unwrap();
        let d = cot.differentiate(DiffVar::Alpha).unwrap();
        let expect = TrigRational::from_int(-1).div(&v(Var::S).pow(2).unwrap()).unwrap();
        assert!(d.equals(&expect).unwrap());
    }

    #[test]
    fn division_by_cos() {
        let s = v(Var::S);
        let one_minus_s2 = TrigRational::one().sub(&s.mul(&s).unwrap()).unwrap();
        let q = one_minus_s2.div(&v(Var::C)).unwrap();
        assert!(q.is_polynomial());
        assert!(q.equals(&v(Var::C)).unwrap());
    }

    #[test]
    fn conjugation_involution() {
        let i = TrigRational::constant(GaussianRational::i());
        let e = i.mul(&v(Var::A)).unwrap().div(&v(Var::Abar).add(&v(Var::B)).unwrap()).unwrap();
        let cc = e.conjugate().conjugate();
        assert!(cc.structural_eq(&e));
        let expected = i.neg().mul(&v(Var::Abar)).unwrap().div(&v(Var::A).add(&v(Var::B)).unwrap()).unwrap();
        assert!(e.conjugate().equals(&expected).unwrap());
    }

    #[test]
    fn zero_denominator_rejected() {
        let s = v(Var::S);
        let c = v(Var::C);
        let z = s.mul(&s).unwrap().add(&c.mul(&c).unwrap()).unwrap().sub(&TrigRational::one()).unwrap();
        assert_eq!(TrigRational::one().div(&z).unwrap_err(), EngineError::ZeroDenominator);
    }
}
