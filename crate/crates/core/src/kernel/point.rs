//! Exact evaluation points.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use dashu_ratio::RBig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::quadext::QuadExt;
use super::rational::{parse_rational, rat, Coeff, GaussianRational, Rational};
use super::trig::TrigRational;
use crate::error::{EngineError, Result};

/// A rational point on the circle plus values for a, ρ, b, with ā = conj(a).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SamplePoint {
    pub t: Rational,
    pub a_re: Rational,
    pub a_im: Rational,
    pub rho: Rational,
    pub b: Rational,
}

impl SamplePoint {
    pub fn new(t: Rational, a_re: Rational, a_im: Rational, rho: Rational, b: Rational) -> Result<Self> {
        if t == RBig::ZERO {
            return Err(EngineError::Domain("t = 0 puts sin(alpha) at zero".into()));
        }
        if rho == RBig::ZERO {
            return Err(EngineError::Domain("rho must be nonzero".into()));
        }
        if b <= RBig::ZERO {
            return Err(EngineError::Domain("b must be positive".into()));
        }
        Ok(SamplePoint { t, a_re, a_im, rho, b })
    }

    /// `s = 2t/(1+t²)`.
    pub fn s(&self) -> Rational {
        let t2 = &self.t * &self.t;
        (RBig::from(2) * &self.t) / (RBig::ONE + t2)
    }

    /// `c = (1−t²)/(1+t²)`.
    pub fn c(&self) -> Rational {
        let t2 = &self.t * &self.t;
        (RBig::ONE - &t2) / (RBig::ONE + t2)
    }

    pub fn a(&self) -> GaussianRational {
        GaussianRational::new(self.a_re.clone(), self.a_im.clone())
    }

    /// Values for (s, c, a, ā, ρ, b) in ring-variable order.
    pub fn values(&self) -> [GaussianRational; 6] {
        let a = self.a();
        [
            GaussianRational::real(self.s()),
            GaussianRational::real(self.c()),
            a.clone(),
            a.conj(),
            GaussianRational::real(self.rho.clone()),
            GaussianRational::real(self.b.clone()),
        ]
    }

    /// Whether the point avoids the loci every catalog entry divides by.
    pub fn is_admissible(&self) -> bool {
        let s = self.s();
        let a = self.a();
        let b = GaussianRational::real(self.b.clone());
        let three_s2 = RBig::from(3) * &s * &s;
        s != RBig::ZERO
            && three_s2 != RBig::from(2)
            && Coeff::add(&a, &b) != GaussianRational::zero()
            && Coeff::sub(&a, &b) != GaussianRational::zero()
    }
}

impl fmt::Display for SamplePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t={},a={},rho={},b={}",
            self.t,
            self.a(),
            self.rho,
            self.b
        )
    }
}

/// Parameter values for t, starting with 1/2.
fn t_pool() -> &'static [Rational] {
    static POOL: OnceLock<Vec<Rational>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut out = Vec::new();
        for q in 2i64..=40 {
            for p in 1..q {
                if gcd(p, q) != 1 {
                    continue;
                }
                out.push(rat(p, q));
                out.push(rat(q, p));
                out.push(rat(-p, q));
            }
        }
        out
    })
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

fn random_rational(rng: &mut ChaCha8Rng, span: i64, max_den: i64) -> Rational {
    let n = rng.gen_range(-span..=span);
    let d = rng.gen_range(1..=max_den);
    rat(n, d)
}

/// Deterministic admissible point for a seed; seed 0 has t = 1/2.
pub fn sample_point(seed: u64) -> SamplePoint {
    let pool = t_pool();
    let t = pool[(seed % pool.len() as u64) as usize].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let a_re = random_rational(&mut rng, 40, 13);
        let a_im = random_rational(&mut rng, 40, 13);
        let mut rho = random_rational(&mut rng, 20, 7);
        if rho == RBig::ZERO {
            rho = RBig::ONE;
        }
        let b = rat(rng.gen_range(1..=30), rng.gen_range(1..=7));
        let pt = SamplePoint { t: t.clone(), a_re, a_im, rho, b };
        if pt.is_admissible() {
            return pt;
        }
    }
}

pub fn eval_exact(e: &TrigRational, pt: &SamplePoint) -> Result<GaussianRational> {
    e.eval_at(&pt.values())
}

/// Outcome of a randomized zero test.
#[derive(Clone, Debug, PartialEq)]
pub enum SampledVerdict {
    ProbablyZero { points: usize, skipped: usize },
    NonzeroWitness { point: SamplePoint, value: String },
}

impl SampledVerdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, SampledVerdict::ProbablyZero { .. })
    }
}

/// Run `probe` at `n` admissible points derived from `seed`, skipping poles.
///
/// `probe` returns `Ok(None)` when the quantity vanishes at the point and
/// `Ok(Some(rendered))` with a witness value otherwise.
pub fn sample_zero_test(
    n: usize,
    seed: u64,
    mut probe: impl FnMut(&SamplePoint) -> Result<Option<String>>,
) -> Result<SampledVerdict> {
    let mut done = 0;
    let mut skipped = 0;
    let mut k = 0u64;
    while done < n {
        if skipped > 10 * n + 100 {
            return Err(EngineError::PoleAtPoint);
        }
        let pt = sample_point(seed.wrapping_mul(1_000_003).wrapping_add(k));
        k += 1;
        match probe(&pt) {
            Ok(None) => done += 1,
            Ok(Some(value)) => return Ok(SampledVerdict::NonzeroWitness { point: pt, value }),
            Err(e) if e.is_pole() => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(SampledVerdict::ProbablyZero { points: done, skipped })
}

pub fn is_zero_sampled(e: &TrigRational, n: usize, seed: u64) -> Result<SampledVerdict> {
    sample_zero_test(n, seed, |pt| {
        let v = eval_exact(e, pt)?;
        Ok(if v.is_zero() { None } else { Some(v.to_string()) })
    })
}

/// The α values the engine knows how to handle exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AlphaTag {
    Pi4,
    Pi3,
    /// Pythagorean parameter t with s = 2t/(1+t²).
    T(Rational),
}

impl AlphaTag {
    /// Exact (s, c) in ℚ(i, √2), ℚ(i, √3) or ℚ(i).
    pub fn sin_cos(&self) -> (QuadExt, QuadExt) {
        let half = GaussianRational::from_ratio(1, 2);
        match self {
            AlphaTag::Pi4 => {
                let r = QuadExt::new(GaussianRational::zero(), half, 2);
                (r.clone(), r)
            }
            AlphaTag::Pi3 => (
                QuadExt::new(GaussianRational::zero(), half.clone(), 3),
                QuadExt::new(half, GaussianRational::zero(), 3),
            ),
            AlphaTag::T(t) => {
                let pt = SamplePoint {
                    t: t.clone(),
                    a_re: RBig::ZERO,
                    a_im: RBig::ZERO,
                    rho: RBig::ONE,
                    b: RBig::ONE,
                };
                (
                    QuadExt::base(GaussianRational::real(pt.s())),
                    QuadExt::base(GaussianRational::real(pt.c())),
                )
            }
        }
    }

    /// α as a float, for numeric work.
    pub fn to_f64(&self) -> f64 {
        match self {
            AlphaTag::Pi4 => std::f64::consts::FRAC_PI_4,
            AlphaTag::Pi3 => std::f64::consts::FRAC_PI_3,
            AlphaTag::T(t) => 2.0 * t.to_f64_fast().atan(),
        }
    }
}

impl FromStr for AlphaTag {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "pi/4" | "π/4" => Ok(AlphaTag::Pi4),
            "pi/3" | "π/3" => Ok(AlphaTag::Pi3),
            other => parse_rational(other)
                .filter(|t| *t != RBig::ZERO)
                .map(AlphaTag::T)
                .ok_or_else(|| EngineError::Config(format!("bad alpha tag `{other}`"))),
        }
    }
}

impl fmt::Display for AlphaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaTag::Pi4 => write!(f, "pi/4"),
            AlphaTag::Pi3 => write!(f, "pi/3"),
            AlphaTag::T(t) => write!(f, "t={}", t),
        }
    }
}

/// Evaluate at a special angle with given a, ρ, b (ā = conj(a)).
pub fn eval_at_angle(
    e: &TrigRational,
    alpha: &AlphaTag,
    a: &GaussianRational,
    rho: &GaussianRational,
    b: &GaussianRational,
) -> Result<QuadExt> {
    let (s, c) = alpha.sin_cos();
    let vals = [
        s,
        c,
        QuadExt::base(a.clone()),
        QuadExt::base(a.conj()),
        QuadExt::base(rho.clone()),
        QuadExt::base(b.clone()),
    ];
    e.eval_at(&vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::monomial::Var;

    #[test]
    fn seed_zero_is_half() {
        let p = sample_point(0);
        assert_eq!(p.t, rat(1, 2));
        assert_eq!(p.s(), rat(4, 5));
        assert_eq!(p.c(), rat(3, 5));
        assert_eq!(sample_point(0), p);
    }

    #[test]
    fn circle_identity_holds() {
        for seed in 0..50 {
            let p = sample_point(seed);
            assert!(p.is_admissible());
            assert_eq!(p.s() * p.s() + p.c() * p.c(), RBig::ONE);
        }
    }

    #[test]
    fn sampled_zero_test() {
        let s = TrigRational::var(Var::S);
        let c = TrigRational::var(Var::C);
        // Built without reduction on purpose: s·s + c·c − 1 reduces to zero anyway.
        let e = s.mul(&s).unwrap().add(&c.mul(&c).unwrap()).unwrap().sub(&TrigRational::one()).unwrap();
        assert!(is_zero_sampled(&e, 20, 1).unwrap().is_zero());
        assert!(!is_zero_sampled(&s, 5, 1).unwrap().is_zero());
    }

    #[test]
    fn alpha_tags_parse() {
        assert_eq!("pi/4".parse::<AlphaTag>().unwrap(), AlphaTag::Pi4);
        assert_eq!("1/2".parse::<AlphaTag>().unwrap(), AlphaTag::T(rat(1, 2)));
        assert!("0".parse::<AlphaTag>().is_err());
        let (s, c) = AlphaTag::Pi3.sin_cos();
        assert!(s.mul(&s).add(&c.mul(&c)).is_one());
    }
}
