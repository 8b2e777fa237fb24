//! ℚ(i, √d): exact values at the special angles π/4 and π/3.

use std::cmp::Ordering;
use std::fmt;

use super::rational::{Coeff, GaussianRational};

/// `p + q·√d` with `p, q ∈ ℚ(i)` and `d` a positive square-free integer.
///
/// `d == 0` marks an element of ℚ(i) that has not been tied to an extension
/// yet (then `q` is zero); it combines with any `d`.
#[derive(Clone, Debug)]
pub struct QuadExt {
    pub p: GaussianRational,
    pub q: GaussianRational,
    pub d: i64,
}

impl QuadExt {
    pub fn new(p: GaussianRational, q: GaussianRational, d: i64) -> Self {
        assert!(d > 0, "extension radicand must be positive");
        QuadExt { p, q, d }
    }

    pub fn base(p: GaussianRational) -> Self {
        QuadExt {
            p,
            q: GaussianRational::zero(),
            d: 0,
        }
    }

    /// `√d` itself.
    pub fn sqrt(d: i64) -> Self {
        QuadExt::new(GaussianRational::zero(), GaussianRational::one(), d)
    }

    fn join(&self, o: &Self) -> i64 {
        match (self.d, o.d) {
            (0, d) | (d, 0) => d,
            (d1, d2) => {
                assert_eq!(d1, d2, "mixing different quadratic extensions");
                d1
            }
        }
    }

    pub fn is_rational_part_only(&self) -> bool {
        self.q.is_zero()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        let r = (self.d.max(0) as f64).sqrt();
        let (pr, pi) = self.p.to_f64_pair();
        let (qr, qi) = self.q.to_f64_pair();
        (pr + qr * r, pi + qi * r)
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.q == o.q && (self.q.is_zero() || self.d == o.d)
    }
}

impl Eq for QuadExt {}

impl Coeff for QuadExt {
    fn zero() -> Self {
        QuadExt::base(GaussianRational::zero())
    }
    fn one() -> Self {
        QuadExt::base(GaussianRational::one())
    }
    fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }
    fn is_one(&self) -> bool {
        self.p.is_one() && self.q.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        let d = self.join(o);
        QuadExt {
            p: self.p.add(&o.p),
            q: self.q.add(&o.q),
            d,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        let d = self.join(o);
        QuadExt {
            p: self.p.sub(&o.p),
            q: self.q.sub(&o.q),
            d,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        let d = self.join(o);
        let qq = self.q.mul(&o.q).mul(&GaussianRational::from_int(d));
        QuadExt {
            p: self.p.mul(&o.p).add(&qq),
            q: self.p.mul(&o.q).add(&self.q.mul(&o.p)),
            d,
        }
    }
    fn neg(&self) -> Self {
        QuadExt {
            p: self.p.neg(),
            q: self.q.neg(),
            d: self.d,
        }
    }
    fn inv(&self) -> Option<Self> {
        // (p + q√d)⁻¹ = (p − q√d) / (p² − d q²); the norm is nonzero for d square-free.
        let norm = self
            .p
            .mul(&self.p)
            .sub(&self.q.mul(&self.q).mul(&GaussianRational::from_int(self.d)));
        let ninv = norm.inv()?;
        Some(QuadExt {
            p: self.p.mul(&ninv),
            q: self.q.neg().mul(&ninv),
            d: self.d,
        })
    }
    fn conj(&self) -> Self {
        QuadExt {
            p: self.p.conj(),
            q: self.q.conj(),
            d: self.d,
        }
    }
    fn from_gaussian(q: &GaussianRational) -> Self {
        QuadExt::base(q.clone())
    }
    fn structural_cmp(&self, o: &Self) -> Ordering {
        self.p
            .structural_cmp(&o.p)
            .then_with(|| self.q.structural_cmp(&o.q))
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", self.p);
        }
        if !self.p.is_zero() {
            write!(f, "({})+", self.p)?;
        }
        write!(f, "({})*sqrt({})", self.q, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_squared_is_two() {
        let r = QuadExt::sqrt(2);
        assert_eq!(r.mul(&r), QuadExt::from_int(2));
    }

    #[test]
    fn inverse_roundtrip() {
        let x = QuadExt::new(GaussianRational::from_ratio(1, 3), GaussianRational::from_int(2), 3);
        assert!(x.mul(&x.inv().unwrap()).is_one());
    }
}
