//! Floating evaluation of exact expressions.

use std::fmt;

use astro_float::BigFloat;

use super::complex::{atan, pi, real_from_rational, real_to_f64, sin_cos, ComplexF, NumConfig};
use crate::error::{EngineError, Result};
use crate::kernel::{AlphaTag, GaussianRational, Poly, Rational, SamplePoint, TrigRational, Var};

/// Where α comes from: an exact tag or a float.
#[derive(Clone, Debug)]
pub enum AlphaSpec {
    Tag(AlphaTag),
    Value(BigFloat),
}

/// α itself as a float: π/4, π/3 or 2·atan(t).
pub fn alpha_value(tag: &AlphaTag, p: usize) -> BigFloat {
    let rm = astro_float::RoundingMode::ToEven;
    match tag {
        AlphaTag::Pi4 => pi(p).div(&BigFloat::from_u64(4, p), p, rm),
        AlphaTag::Pi3 => pi(p).div(&BigFloat::from_u64(3, p), p, rm),
        AlphaTag::T(t) => {
            let x = atan(&real_from_rational(t, p), p);
            x.add(&x, p, rm)
        }
    }
}

/// Values of (s, c, a, ā, ρ, b) as floats, with ā = conj(a).
#[derive(Clone, Debug)]
pub struct NumPoint {
    pub alpha: AlphaSpec,
    vals: [ComplexF; 6],
}

impl NumPoint {
    pub fn at_tag(tag: &AlphaTag, a: &GaussianRational, rho: &Rational, b: &Rational, p: usize) -> Self {
        let (s, c) = match tag {
            AlphaTag::Pi4 => {
                let h = BigFloat::from_u64(2, p).sqrt(p, astro_float::RoundingMode::ToEven);
                let h = h.div(&BigFloat::from_u64(2, p), p, astro_float::RoundingMode::ToEven);
                (h.clone(), h)
            }
            AlphaTag::Pi3 => {
                let r = BigFloat::from_u64(3, p).sqrt(p, astro_float::RoundingMode::ToEven);
                let two = BigFloat::from_u64(2, p);
                (
                    r.div(&two, p, astro_float::RoundingMode::ToEven),
                    BigFloat::from_u64(1, p).div(&two, p, astro_float::RoundingMode::ToEven),
                )
            }
            AlphaTag::T(t) => {
                let pt = SamplePoint {
                    t: t.clone(),
                    a_re: Rational::ZERO,
                    a_im: Rational::ZERO,
                    rho: Rational::ONE,
                    b: Rational::ONE,
                };
                (real_from_rational(&pt.s(), p), real_from_rational(&pt.c(), p))
            }
        };
        let a = ComplexF::from_gaussian(a, p);
        NumPoint {
            alpha: AlphaSpec::Tag(tag.clone()),
            vals: [
                ComplexF::from_real(s, p),
                ComplexF::from_real(c, p),
                a.clone(),
                a.conj(),
                ComplexF::from_rational(rho, p),
                ComplexF::from_rational(b, p),
            ],
        }
    }

    pub fn at_alpha(alpha: &BigFloat, a: &ComplexF, rho: &ComplexF, b: &ComplexF) -> Self {
        let p = a.precision();
        let (s, c) = sin_cos(alpha, p);
        NumPoint {
            alpha: AlphaSpec::Value(alpha.clone()),
            vals: [
                ComplexF::from_real(s, p),
                ComplexF::from_real(c, p),
                a.clone(),
                a.conj(),
                rho.clone(),
                b.clone(),
            ],
        }
    }

    pub fn from_sample(pt: &SamplePoint, p: usize) -> Self {
        NumPoint::at_tag(&AlphaTag::T(pt.t.clone()), &pt.a(), &pt.rho, &pt.b, p)
    }

    pub fn values(&self) -> &[ComplexF; 6] {
        &self.vals
    }

    pub fn precision(&self) -> usize {
        self.vals[0].precision()
    }

    pub fn a(&self) -> &ComplexF {
        &self.vals[Var::A.index()]
    }
}

impl fmt::Display for NumPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.alpha {
            AlphaSpec::Tag(t) => write!(f, "alpha={t}")?,
            AlphaSpec::Value(x) => write!(f, "alpha={:.17e}", real_to_f64(x))?,
        }
        write!(f, ",a={},rho={},b={}", self.vals[2], self.vals[4], self.vals[5])
    }
}

/// Value of a polynomial with cached powers of each variable.
pub fn eval_poly(poly: &Poly, vals: &[ComplexF; 6]) -> ComplexF {
    let p = vals[0].precision();
    let mut pows: [Vec<ComplexF>; 6] = Default::default();
    let mut acc = ComplexF::zero(p);
    for (m, c) in poly.terms() {
        let mut t = ComplexF::from_gaussian(c, p);
        for v in Var::ALL {
            let e = m.exp(v) as usize;
            if e == 0 {
                continue;
            }
            let cache = &mut pows[v.index()];
            if cache.is_empty() {
                cache.push(ComplexF::from_int(1, p));
            }
            while cache.len() <= e {
                let next = cache.last().unwrap().mul(&vals[v.index()]);
                cache.push(next);
            }
            t = t.mul(&cache[e]);
        }
        acc = acc.add(&t);
    }
    acc
}

/// Float value of an exact expression; every denominator factor must exceed `tol_den`.
pub fn eval_complex(e: &TrigRational, pt: &NumPoint, cfg: &NumConfig) -> Result<ComplexF> {
    let vals = pt.values();
    let mut den = ComplexF::from_int(1, pt.precision());
    for f in e.den_factors() {
        let v = eval_poly(&f.poly, vals);
        if v.abs_f64() < cfg.tol_den {
            return Err(EngineError::PoleNearPoint);
        }
        den = den.mul(&v.powi(f.exp));
    }
    eval_poly(e.num(), vals).div(&den)
}
