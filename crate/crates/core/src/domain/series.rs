//! Truncated Taylor series in (hα, ha, hā) with exact coefficients.
//!
//! A function f(α, a, ā) is represented near a point by its Taylor
//! coefficients up to total degree `order`. Differentiation shifts
//! coefficients and lowers the order by one, so a value built from nested
//! derivatives stays exact as long as the initial order covers the nesting.

use std::sync::OnceLock;

use super::{pole, Domain};
use crate::error::{EngineError, Result};
use crate::kernel::{Coeff, DiffVar, GaussianRational, QuadExt, SamplePoint, Var};

/// Largest supported truncation order.
pub const MAX_ORDER: usize = 8;

/// Default order: catalog entries nest derivatives four deep.
pub const DEFAULT_ORDER: usize = 5;

struct Tables {
    /// Exponent triples in graded order.
    monos: Vec<[u8; 3]>,
    /// `count[d]` = number of monomials of degree ≤ d.
    count: Vec<usize>,
    /// Flattened `(MAX_ORDER+1)^3` lookup from exponents to position.
    index: Vec<u16>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let n = MAX_ORDER + 1;
        let mut monos = Vec::new();
        let mut count = Vec::new();
        let mut index = vec![u16::MAX; n * n * n];
        for d in 0..=MAX_ORDER {
            for i in (0..=d).rev() {
                for j in (0..=d - i).rev() {
                    let k = d - i - j;
                    index[(i * n + j) * n + k] = monos.len() as u16;
                    monos.push([i as u8, j as u8, k as u8]);
                }
            }
            count.push(monos.len());
        }
        Tables { monos, count, index }
    })
}

#[inline]
fn idx(e: [usize; 3]) -> usize {
    let n = MAX_ORDER + 1;
    tables().index[(e[0] * n + e[1]) * n + e[2]] as usize
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// A truncated series; coefficient `i` belongs to `tables().monos[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<K> {
    order: usize,
    coeffs: Vec<K>,
}

impl<K: Coeff> Series<K> {
    pub fn constant(order: usize, c: K) -> Self {
        let mut coeffs = vec![K::zero(); tables().count[order]];
        coeffs[0] = c;
        Series { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> &K {
        &self.coeffs[0]
    }

    /// Coefficient of hα^i ha^j hā^k (zero beyond the order).
    pub fn coeff(&self, e: [usize; 3]) -> K {
        if e.iter().sum::<usize>() > self.order {
            K::zero()
        } else {
            self.coeffs[idx(e)].clone()
        }
    }

    fn truncated(&self, order: usize) -> &[K] {
        &self.coeffs[..tables().count[order]]
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let coeffs = self
            .truncated(order)
            .iter()
            .zip(o.truncated(order))
            .map(|(x, y)| x.add(y))
            .collect();
        Series { order, coeffs }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let coeffs = self
            .truncated(order)
            .iter()
            .zip(o.truncated(order))
            .map(|(x, y)| x.sub(y))
            .collect();
        Series { order, coeffs }
    }

    pub fn neg(&self) -> Self {
        Series {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, k: &K) -> Self {
        Series {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.mul(k)).collect(),
        }
    }

    fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        if o.is_constant() {
            let mut r = self.scale(&o.coeffs[0]);
            r.coeffs.truncate(tables().count[order]);
            r.order = order;
            return r;
        }
        if self.is_constant() {
            return o.mul(self);
        }
        let t = tables();
        let mut out = vec![K::zero(); t.count[order]];
        for (i, x) in self.truncated(order).iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let mi = t.monos[i];
            let di = (mi[0] + mi[1] + mi[2]) as usize;
            for (j, y) in o.coeffs[..t.count[order - di]].iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let mj = t.monos[j];
                let target = idx([
                    (mi[0] + mj[0]) as usize,
                    (mi[1] + mj[1]) as usize,
                    (mi[2] + mj[2]) as usize,
                ]);
                out[target].add_assign(&x.mul(y));
            }
        }
        Series { order, coeffs: out }
    }

    pub fn inv(&self) -> Result<Self> {
        let c0 = self.coeffs[0].clone();
        let c0_inv = c0.inv().ok_or_else(pole)?;
        // 1/g = (1/g0) Σ (−u)^k with u = g/g0 − 1, which has no constant term.
        let mut u = self.scale(&c0_inv);
        u.coeffs[0] = K::zero();
        let neg_u = u.neg();
        let mut acc = Series::constant(self.order, K::one());
        let mut power = Series::constant(self.order, K::one());
        for _ in 0..self.order {
            power = power.mul(&neg_u);
            acc = acc.add(&power);
        }
        Ok(acc.scale(&c0_inv))
    }

    /// ∂/∂h for h = hα (0), ha (1), hā (2).
    pub fn diff(&self, axis: usize) -> Result<Self> {
        if self.order == 0 {
            return Err(EngineError::SeriesOrderExhausted);
        }
        let order = self.order - 1;
        let t = tables();
        let mut out = vec![K::zero(); t.count[order]];
        for (pos, m) in t.monos[..t.count[order]].iter().enumerate() {
            let mut e = [m[0] as usize, m[1] as usize, m[2] as usize];
            e[axis] += 1;
            let c = &self.coeffs[idx(e)];
            if !c.is_zero() {
                out[pos] = c.mul(&K::from_int(e[axis] as i64));
            }
        }
        Ok(Series { order, coeffs: out })
    }

    /// Conjugate coefficients and exchange the roles of ha and hā.
    pub fn conj(&self) -> Self {
        let t = tables();
        let mut out = vec![K::zero(); self.coeffs.len()];
        for (pos, m) in t.monos[..self.coeffs.len()].iter().enumerate() {
            let target = idx([m[0] as usize, m[2] as usize, m[1] as usize]);
            out[target] = self.coeffs[pos].conj();
        }
        Series {
            order: self.order,
            coeffs: out,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Series arithmetic anchored at a point with real s, c, ρ, b and ā = conj(a).
#[derive(Clone, Debug)]
pub struct SeriesDomain<K> {
    values: [K; 6],
    order: usize,
}

impl<K: Coeff> SeriesDomain<K> {
    /// `values` in ring-variable order (s, c, a, ā, ρ, b).
    pub fn new(values: [K; 6], order: usize) -> Self {
        assert!(order <= MAX_ORDER, "series order above {MAX_ORDER}");
        SeriesDomain { values, order }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn values(&self) -> &[K; 6] {
        &self.values
    }

    fn trig(&self, sin: bool) -> Series<K> {
        let (s0, c0) = (&self.values[0], &self.values[1]);
        let mut out = Series::constant(self.order, K::zero());
        for k in 0..=self.order {
            // sin(α0+h) = s0 cos h + c0 sin h; cos(α0+h) = c0 cos h − s0 sin h.
            let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
            let w = K::from_gaussian(&GaussianRational::from_ratio(sign, factorial(k)));
            let base = match (sin, k % 2 == 0) {
                (true, true) => s0.clone(),
                (true, false) => c0.clone(),
                (false, true) => c0.clone(),
                (false, false) => s0.neg(),
            };
            out.coeffs[idx([k, 0, 0])] = base.mul(&w);
        }
        out
    }
}

impl SeriesDomain<GaussianRational> {
    pub fn at_point(pt: &SamplePoint, order: usize) -> Self {
        SeriesDomain::new(pt.values(), order)
    }
}

impl SeriesDomain<QuadExt> {
    pub fn at_angle(
        alpha: &crate::kernel::AlphaTag,
        a: &GaussianRational,
        rho: &GaussianRational,
        b: &GaussianRational,
        order: usize,
    ) -> Self {
        let (s, c) = alpha.sin_cos();
        SeriesDomain::new(
            [
                s,
                c,
                QuadExt::base(a.clone()),
                QuadExt::base(a.conj()),
                QuadExt::base(rho.clone()),
                QuadExt::base(b.clone()),
            ],
            order,
        )
    }
}

impl<K: Coeff> Domain for SeriesDomain<K> {
    type Elem = Series<K>;

    fn constant(&self, q: &GaussianRational) -> Series<K> {
        Series::constant(self.order, K::from_gaussian(q))
    }

    fn var(&self, v: Var) -> Series<K> {
        match v {
            Var::S => self.trig(true),
            Var::C => self.trig(false),
            Var::A | Var::Abar => {
                let mut s = Series::constant(self.order, self.values[v.index()].clone());
                if self.order > 0 {
                    let axis = if v == Var::A { 1 } else { 2 };
                    let mut e = [0, 0, 0];
                    e[axis] = 1;
                    s.coeffs[idx(e)] = K::one();
                }
                s
            }
            Var::Rho | Var::B => Series::constant(self.order, self.values[v.index()].clone()),
        }
    }

    fn add(&self, x: &Series<K>, y: &Series<K>) -> Result<Series<K>> {
        Ok(x.add(y))
    }
    fn sub(&self, x: &Series<K>, y: &Series<K>) -> Result<Series<K>> {
        Ok(x.sub(y))
    }
    fn mul(&self, x: &Series<K>, y: &Series<K>) -> Result<Series<K>> {
        Ok(x.mul(y))
    }
    fn div(&self, x: &Series<K>, y: &Series<K>) -> Result<Series<K>> {
        if y.is_constant() {
            let inv = y.coeffs[0].inv().ok_or_else(pole)?;
            let mut r = x.scale(&inv);
            r.order = r.order.min(y.order);
            r.coeffs.truncate(tables().count[r.order]);
            return Ok(r);
        }
        Ok(x.mul(&y.inv()?))
    }
    fn neg(&self, x: &Series<K>) -> Series<K> {
        x.neg()
    }
    fn diff(&self, x: &Series<K>, v: DiffVar) -> Result<Series<K>> {
        x.diff(match v {
            DiffVar::Alpha => 0,
            DiffVar::A => 1,
            DiffVar::Abar => 2,
        })
    }
    fn conj(&self, x: &Series<K>) -> Result<Series<K>> {
        Ok(x.conj())
    }
    fn is_zero(&self, x: &Series<K>) -> bool {
        x.is_zero()
    }
    fn value_is_zero(&self, x: &Series<K>) -> bool {
        x.value().is_zero()
    }
    fn size(&self, x: &Series<K>) -> usize {
        usize::from(!x.value().is_zero())
    }
    fn describe(&self, x: &Series<K>) -> String {
        x.value().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Symbolic;
    use crate::kernel::{sample_point, TrigRational};

    fn lift<D: Domain>(d: &D, e: &TrigRational) -> D::Elem {
        // Evaluate numerator and denominator factors through the domain.
        let poly = |p: &crate::kernel::Poly| {
            let mut acc = d.zero();
            for (m, c) in p.terms() {
                let mut t = d.constant(c);
                for v in Var::ALL {
                    for _ in 0..m.exp(v) {
                        t = d.mul(&t, &d.var(v)).unwrap();
                    }
                }
                acc = d.add(&acc, &t).unwrap();
            }
            acc
        };
        let mut out = poly(e.num());
        for f in e.den_factors() {
            for _ in 0..f.exp {
                out = d.div(&out, &poly(&f.poly)).unwrap();
            }
        }
        out
    }

    #[test]
    fn circle_relation_holds_to_all_orders() {
        let dom = SeriesDomain::at_point(&sample_point(3), 6);
        let s = dom.var(Var::S);
        let c = dom.var(Var::C);
        let r = s.mul(&s).add(&c.mul(&c)).sub(&Series::constant(6, GaussianRational::one()));
        assert!(r.is_zero());
    }

    #[test]
    fn derivatives_match_symbolic() {
        let e = crate::lang::parse_expr("cot(alpha)*(a - b)/(abar + b)^2 + a*abar*sin(alpha)").unwrap();
        let pt = sample_point(5);
        let dom = SeriesDomain::at_point(&pt, 4);
        let ser = lift(&dom, &e);
        for v in [DiffVar::Alpha, DiffVar::A, DiffVar::Abar] {
            let sym = Symbolic.diff(&e, v).unwrap();
            let num = dom.diff(&ser, v).unwrap();
            assert_eq!(num.value(), &crate::kernel::eval_exact(&sym, &pt).unwrap());
        }
        let sym2 = e.differentiate(DiffVar::Alpha).unwrap().differentiate(DiffVar::A).unwrap();
        let num2 = ser.diff(0).unwrap().diff(1).unwrap();
        assert_eq!(num2.value(), &crate::kernel::eval_exact(&sym2, &pt).unwrap());
        let cj = lift(&dom, &e.conjugate());
        assert_eq!(cj, ser.conj());
    }

    #[test]
    fn order_exhaustion_is_reported() {
        let dom = SeriesDomain::at_point(&sample_point(1), 1);
        let a = dom.var(Var::A);
        let d1 = dom.diff(&a, DiffVar::A).unwrap();
        assert_eq!(dom.diff(&d1, DiffVar::A).unwrap_err(), EngineError::SeriesOrderExhausted);
    }
}
