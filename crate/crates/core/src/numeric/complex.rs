//! Complex numbers over `astro-float` binary floats.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use dashu_int::ops::UnsignedAbs;
use dashu_int::IBig;

use crate::error::{EngineError, Result};
use crate::kernel::{GaussianRational, Rational};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Precision and tolerances of the numeric layer.
#[derive(Clone, Debug, PartialEq)]
pub struct NumConfig {
    /// Significand bits.
    pub precision: usize,
    /// Smallest denominator magnitude accepted by evaluation.
    pub tol_den: f64,
    /// Largest accepted relative backward error of a cubic root.
    pub tol_root: f64,
    /// Largest distance between a root and the conjugate of its partner.
    pub tol_conj: f64,
    /// Smallest accepted |c3| relative to the other coefficients.
    pub tol_lead: f64,
    /// Relative imaginary part below which a value counts as real.
    pub tol_real: f64,
    /// |imag| below which a root counts as real (relative to |root|).
    pub tol_imag: f64,
}

impl Default for NumConfig {
    fn default() -> Self {
        NumConfig::for_precision(128)
    }
}

impl NumConfig {
    /// Tolerances scale with the precision; the exponents are those at 128 bits.
    pub fn for_precision(bits: usize) -> Self {
        let at = |k: f64| 10f64.powf(-k * bits as f64 / 128.0);
        NumConfig {
            precision: bits,
            tol_den: at(30.0),
            tol_root: at(25.0),
            tol_conj: at(20.0),
            tol_lead: at(30.0),
            tol_real: at(20.0),
            tol_imag: at(15.0),
        }
    }
}

/// A real binary float with its working precision.
pub fn real_from_rational(q: &Rational, p: usize) -> BigFloat {
    let num = int_to_float(q.numerator(), p);
    let den = int_to_float(&IBig::from(q.denominator().clone()), p);
    num.div(&den, p, RM)
}

fn int_to_float(n: &IBig, p: usize) -> BigFloat {
    let (sign, mag) = (n.signum(), n.unsigned_abs());
    let bytes = mag.to_le_bytes();
    // Exact accumulation, rounded once at the end.
    let wide = bytes.len() * 8 + 128;
    let shift = BigFloat::from_u128(1u128 << 64, wide);
    let mut acc = BigFloat::from_u64(0, wide);
    let words: Vec<u64> = bytes
        .chunks(8)
        .map(|c| {
            let mut w = [0u8; 8];
            w[..c.len()].copy_from_slice(c);
            u64::from_le_bytes(w)
        })
        .collect();
    for w in words.iter().rev() {
        acc = acc.mul(&shift, wide, RM).add(&BigFloat::from_u64(*w, wide), wide, RM);
    }
    let mut out = acc;
    out.set_precision(p, RM).expect("valid precision");
    if sign < IBig::ZERO {
        out.neg()
    } else {
        out
    }
}

/// Nearest f64 (saturating to ±inf or 0 outside the f64 range).
pub fn real_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    match x.as_raw_parts() {
        Some((m, _, s, e, _)) => {
            let top = *m.last().unwrap_or(&0) as f64;
            let v = top * 2f64.powi(e - 64);
            if s == Sign::Neg {
                -v
            } else {
                v
            }
        }
        None => f64::NAN,
    }
}

fn finite(x: BigFloat) -> Result<BigFloat> {
    if x.is_nan() || x.is_inf() {
        Err(EngineError::Domain("non-finite floating value".into()))
    } else {
        Ok(x)
    }
}

/// `re + im·i` at a fixed precision. Never NaN or infinite.
#[derive(Clone, Debug)]
pub struct ComplexF {
    re: BigFloat,
    im: BigFloat,
    p: usize,
}

impl ComplexF {
    pub fn zero(p: usize) -> Self {
        ComplexF {
            re: BigFloat::from_u64(0, p),
            im: BigFloat::from_u64(0, p),
            p,
        }
    }

    pub fn from_f64(re: f64, im: f64, p: usize) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(EngineError::Domain("non-finite floating value".into()));
        }
        Ok(ComplexF {
            re: BigFloat::from_f64(re, p),
            im: BigFloat::from_f64(im, p),
            p,
        })
    }

    pub fn from_int(n: i64, p: usize) -> Self {
        ComplexF {
            re: BigFloat::from_i64(n, p),
            im: BigFloat::from_u64(0, p),
            p,
        }
    }

    pub fn from_real(re: BigFloat, p: usize) -> Self {
        ComplexF {
            re,
            im: BigFloat::from_u64(0, p),
            p,
        }
    }

    pub fn from_parts(re: BigFloat, im: BigFloat, p: usize) -> Result<Self> {
        Ok(ComplexF {
            re: finite(re)?,
            im: finite(im)?,
            p,
        })
    }

    pub fn from_rational(q: &Rational, p: usize) -> Self {
        ComplexF::from_real(real_from_rational(q, p), p)
    }

    pub fn from_gaussian(q: &GaussianRational, p: usize) -> Self {
        ComplexF {
            re: real_from_rational(&q.re, p),
            im: real_from_rational(&q.im, p),
            p,
        }
    }

    /// Parse `x`, `x+yi`, `x-yi`, `yi` with decimal or `n/d` parts.
    pub fn parse(text: &str, p: usize) -> Result<Self> {
        let q = crate::kernel::rational::parse_gaussian(text)
            .ok_or_else(|| EngineError::Config(format!("bad complex literal `{text}`")))?;
        Ok(ComplexF::from_gaussian(&q, p))
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn re_f64(&self) -> f64 {
        real_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        real_to_f64(&self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.p.max(o.p);
        ComplexF {
            re: self.re.add(&o.re, p, RM),
            im: self.im.add(&o.im, p, RM),
            p,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.p.max(o.p);
        ComplexF {
            re: self.re.sub(&o.re, p, RM),
            im: self.im.sub(&o.im, p, RM),
            p,
        }
    }

    pub fn neg(&self) -> Self {
        ComplexF {
            re: self.re.neg(),
            im: self.im.neg(),
            p: self.p,
        }
    }

    pub fn conj(&self) -> Self {
        ComplexF {
            re: self.re.clone(),
            im: self.im.neg(),
            p: self.p,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.p.max(o.p);
        let rr = self.re.mul(&o.re, p, RM);
        let ii = self.im.mul(&o.im, p, RM);
        let ri = self.re.mul(&o.im, p, RM);
        let ir = self.im.mul(&o.re, p, RM);
        ComplexF {
            re: rr.sub(&ii, p, RM),
            im: ri.add(&ir, p, RM),
            p,
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.mul(&ComplexF::from_int(k, self.p))
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.p;
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(self.p, RM)
    }

    pub fn abs_f64(&self) -> f64 {
        real_to_f64(&self.abs())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(EngineError::PoleAtPoint);
        }
        let p = self.p;
        let n = self.norm_sqr();
        Ok(ComplexF {
            re: finite(self.re.div(&n, p, RM))?,
            im: finite(self.im.neg().div(&n, p, RM))?,
            p,
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = ComplexF::from_int(1, self.p);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.p;
        let r = self.abs();
        let two = BigFloat::from_u64(2, p);
        let re = r.add(&self.re, p, RM).div(&two, p, RM).sqrt(p, RM);
        let im = r.sub(&self.re, p, RM).div(&two, p, RM).sqrt(p, RM);
        let im = if self.im.is_negative() { im.neg() } else { im };
        ComplexF { re, im, p }
    }

    /// |self − o| as a float.
    pub fn dist_f64(&self, o: &Self) -> f64 {
        self.sub(o).abs_f64()
    }

    /// |self − o| / max(|o|, tiny).
    pub fn rel_err_f64(&self, o: &Self) -> f64 {
        let d = self.dist_f64(o);
        let m = o.abs_f64();
        if m == 0.0 {
            d
        } else {
            d / m
        }
    }
}

/// sin and cos of a real float at precision `p`.
pub fn sin_cos(x: &BigFloat, p: usize) -> (BigFloat, BigFloat) {
    with_consts(|cc| (x.sin(p, RM, cc), x.cos(p, RM, cc)))
}

/// atan of a real float at precision `p`.
pub fn atan(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.atan(p, RM, cc))
}

/// π at precision `p`.
pub fn pi(p: usize) -> BigFloat {
    with_consts(|cc| cc.pi(p, RM))
}

pub fn cmp_f64(x: &BigFloat, y: f64) -> Ordering {
    let p = x.mantissa_max_bit_len().unwrap_or(128);
    x.partial_cmp(&BigFloat::from_f64(y, p)).unwrap_or(Ordering::Equal)
}

impl fmt::Display for ComplexF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (self.re_f64(), self.im_f64());
        if im == 0.0 {
            write!(f, "{re:.17e}")
        } else if im < 0.0 {
            write!(f, "{re:.17e}-{:.17e}i", -im)
        } else {
            write!(f, "{re:.17e}+{im:.17e}i")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::rat;

    #[test]
    fn rational_conversion_round_trips_through_f64() {
        for (n, d) in [(1, 3), (-7, 2), (123456789, 1000), (0, 1), (1, 1 << 40)] {
            let x = real_from_rational(&rat(n, d), 128);
            assert!((real_to_f64(&x) - n as f64 / d as f64).abs() <= 1e-15 * (n as f64 / d as f64).abs());
        }
        let big: Rational = "340282366920938463463374607431768211457/3".parse().unwrap();
        let x = real_from_rational(&big, 128);
        assert!((real_to_f64(&x) / 1.1342745564031282e38 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn arithmetic_basics() {
        let p = 128;
        let z = ComplexF::from_f64(3.0, 4.0, p).unwrap();
        assert_eq!(z.abs_f64(), 5.0);
        let w = z.mul(&z.inv().unwrap());
        assert!(w.dist_f64(&ComplexF::from_int(1, p)) < 1e-35);
        let r = ComplexF::from_f64(-4.0, 0.0, p).unwrap().sqrt();
        assert!(r.dist_f64(&ComplexF::from_f64(0.0, 2.0, p).unwrap()) < 1e-35);
        let r = ComplexF::from_f64(0.0, -2.0, p).unwrap().sqrt();
        assert!(r.dist_f64(&ComplexF::from_f64(1.0, -1.0, p).unwrap()) < 1e-35);
        assert!(ComplexF::zero(p).inv().is_err());
    }

    #[test]
    fn default_tolerances() {
        let c = NumConfig::default();
        assert!((c.tol_den / 1e-30 - 1.0).abs() < 1e-9);
        assert!((c.tol_root / 1e-25 - 1.0).abs() < 1e-9);
        assert!((c.tol_real / 1e-20 - 1.0).abs() < 1e-9);
    }
}
