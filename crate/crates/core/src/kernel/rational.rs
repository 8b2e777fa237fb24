//! Exact coefficient arithmetic.
//!
//! `GaussianRational` is the coefficient field ℚ(i) of every expression the
//! engine manipulates. The [`Coeff`] trait abstracts over it (and over the
//! quadratic extensions used for special-angle evaluation) so that the
//! polynomial code is written once.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use dashu_int::ops::{BitTest, UnsignedAbs};
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

pub type Rational = RBig;

/// Parse a rational literal such as `3`, `-3/4` or `1.25`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((int_part, frac_part)) = text.split_once('.') {
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let num = IBig::from_str(&digits).ok()?;
        let den = UBig::from(10u8).pow(frac_part.len());
        let q = RBig::from_parts(num, den);
        Some(if negative { -q } else { q })
    } else {
        RBig::from_str(text).ok()
    }
}

/// Parse `x`, `yi`, `x+yi` or `x-yi` where x, y are rational literals.
pub fn parse_gaussian(text: &str) -> Option<GaussianRational> {
    let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = text.strip_suffix('i') else {
        return parse_rational(&text).map(GaussianRational::real);
    };
    // Split at the last sign that is not leading.
    let cut = body
        .char_indices()
        .filter(|&(k, ch)| k > 0 && (ch == '+' || ch == '-'))
        .map(|(k, _)| k)
        .last();
    let (re, im) = match cut {
        Some(k) => (parse_rational(&body[..k])?, &body[k..]),
        None => (RBig::ZERO, body),
    };
    let im = match im {
        "" | "+" => RBig::ONE,
        "-" => -RBig::ONE,
        s => parse_rational(s.strip_prefix('+').unwrap_or(s))?,
    };
    Some(GaussianRational::new(re, im))
}

pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator in rational literal");
    RBig::from_parts_signed(IBig::from(n), IBig::from(d))
}

/// Shared interface of exact coefficient fields.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;
    fn from_gaussian(q: &GaussianRational) -> Self;
    fn structural_cmp(&self, other: &Self) -> Ordering;

    fn add_assign(&mut self, other: &Self) {
        *self = Coeff::add(self, other);
    }
    fn sub_assign(&mut self, other: &Self) {
        *self = Coeff::sub(self, other);
    }
    fn from_int(n: i64) -> Self {
        Self::from_gaussian(&GaussianRational::from_int(n))
    }
}

/// An element `re + im·i` of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: RBig::ZERO }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(RBig::from(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::real(rat(n, d))
    }

    pub fn i() -> Self {
        GaussianRational { re: RBig::ZERO, im: RBig::ONE }
    }

    pub fn zero() -> Self {
        GaussianRational::default()
    }

    pub fn one() -> Self {
        Self::real(RBig::ONE)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// |z|² as a rational.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Self::real(RBig::ONE / &self.re));
        }
        let n = self.norm_sqr();
        Some(GaussianRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = Coeff::mul(&acc, &base);
            }
            base = Coeff::mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64_fast(), self.im.to_f64_fast())
    }

    /// Number of bits in the largest numerator or denominator, a size proxy.
    pub fn bit_size(&self) -> usize {
        let n = |q: &Rational| q.numerator().unsigned_abs().bit_len().max(q.denominator().bit_len());
        n(&self.re).max(n(&self.im))
    }
}

impl Coeff for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Self::real(&self.re + &o.re);
        }
        GaussianRational {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Self::real(&self.re - &o.re);
        }
        GaussianRational {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        match (self.im.is_zero(), o.im.is_zero()) {
            (true, true) => Self::real(&self.re * &o.re),
            (true, false) => GaussianRational {
                re: &self.re * &o.re,
                im: &self.re * &o.im,
            },
            (false, true) => GaussianRational {
                re: &self.re * &o.re,
                im: &self.im * &o.re,
            },
            (false, false) => GaussianRational {
                re: &self.re * &o.re - &self.im * &o.im,
                im: &self.re * &o.im + &self.im * &o.re,
            },
        }
    }
    fn neg(&self) -> Self {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
    fn inv(&self) -> Option<Self> {
        GaussianRational::inv(self)
    }
    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }
    fn from_gaussian(q: &GaussianRational) -> Self {
        q.clone()
    }
    fn structural_cmp(&self, o: &Self) -> Ordering {
        self.re.cmp(&o.re).then_with(|| self.im.cmp(&o.im))
    }
    fn add_assign(&mut self, o: &Self) {
        self.re += &o.re;
        if !o.im.is_zero() {
            self.im += &o.im;
        }
    }
    fn sub_assign(&mut self, o: &Self) {
        self.re -= &o.re;
        if !o.im.is_zero() {
            self.im -= &o.im;
        }
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        GaussianRational::from_int(n)
    }
}

impl From<Rational> for GaussianRational {
    fn from(q: Rational) -> Self {
        GaussianRational::real(q)
    }
}

fn fmt_rational(q: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.denominator().is_one() {
        write!(f, "{}", q.numerator())
    } else {
        write!(f, "{}/{}", q.numerator(), q.denominator())
    }
}

impl fmt::Display for GaussianRational {
    /// Prints in the expression syntax: `3/2`, `-i`, `1/2+3/4*i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        if !self.re.is_zero() {
            fmt_rational(&self.re, f)?;
            if self.im > RBig::ZERO {
                write!(f, "+")?;
            }
        }
        if self.im.is_one() {
            write!(f, "i")
        } else if self.im == RBig::NEG_ONE {
            write!(f, "-i")
        } else {
            fmt_rational(&self.im, f)?;
            write!(f, "*i")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_literals() {
        let g = |s| parse_gaussian(s).unwrap();
        assert_eq!(g("3"), GaussianRational::from_int(3));
        assert_eq!(g("-1/2+i"), GaussianRational::new(rat(-1, 2), rat(1, 1)));
        assert_eq!(g("0.5-2i"), GaussianRational::new(rat(1, 2), rat(-2, 1)));
        assert_eq!(g("-i"), GaussianRational::new(rat(0, 1), rat(-1, 1)));
        assert_eq!(g("3/4i"), GaussianRational::new(rat(0, 1), rat(3, 4)));
        assert!(parse_gaussian("1+").is_none());
        assert!(parse_gaussian("x").is_none());
    }

    #[test]
    fn parse_literals() {
        assert_eq!(parse_rational("3"), Some(rat(3, 1)));
        assert_eq!(parse_rational("-3/4"), Some(rat(-3, 4)));
        assert_eq!(parse_rational("1.25"), Some(rat(5, 4)));
        assert_eq!(parse_rational("-0.5"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn lowest_terms_positive_denominator() {
        let q = rat(6, -8);
        assert_eq!(q.numerator(), &IBig::from(-3));
        assert_eq!(q.denominator(), &UBig::from(4u8));
    }

    #[test]
    fn gaussian_field_ops() {
        let z = GaussianRational::new(rat(1, 2), rat(3, 4));
        let w = z.inv().unwrap();
        assert!(Coeff::mul(&z, &w).is_one());
        assert_eq!(Coeff::mul(&GaussianRational::i(), &GaussianRational::i()), GaussianRational::from_int(-1));
        assert_eq!(z.conj().conj(), z);
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussianRational::from_ratio(3, 2).to_string(), "3/2");
        assert_eq!(GaussianRational::i().to_string(), "i");
        assert_eq!(GaussianRational::i().conj().to_string(), "-i");
        assert_eq!(GaussianRational::new(rat(1, 2), rat(-3, 4)).to_string(), "1/2-3/4*i");
    }
}
