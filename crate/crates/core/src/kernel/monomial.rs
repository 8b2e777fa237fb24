use std::fmt;

/// Ring variables of the base expression ring.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Var {
    /// sin α
    S,
    /// cos α
    C,
    A,
    Abar,
    Rho,
    B,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::S, Var::C, Var::A, Var::Abar, Var::Rho, Var::B];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Name in the expression syntax.
    pub fn surface_name(self) -> &'static str {
        match self {
            Var::S => "sin(alpha)",
            Var::C => "cos(alpha)",
            Var::A => "a",
            Var::Abar => "abar",
            Var::Rho => "rho",
            Var::B => "b",
        }
    }
}

const DEG_SHIFT: u32 = 48;
const FIELD_MASK: u64 = 0xff;

/// A power product `s^i c^j a^k ā^l ρ^m b^n`, packed into one word.
///
/// Layout (high to low): total degree (16 bits), then the exponents of
/// b, ρ, ā, a, c, s (8 bits each). Integer comparison is therefore graded
/// lexicographic order with s < c < a < ā < ρ < b. The total degree is kept
/// below 256 so that adding two packed words never carries between fields.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);
    pub const MAX_DEGREE: u32 = 255;

    #[inline]
    fn shift(v: Var) -> u32 {
        8 * v.index() as u32
    }

    pub fn var(v: Var) -> Monomial {
        Monomial((1u64 << DEG_SHIFT) | (1u64 << Self::shift(v)))
    }

    pub fn from_exponents(exps: [u32; 6]) -> Option<Monomial> {
        let deg: u32 = exps.iter().sum();
        if deg > Self::MAX_DEGREE {
            return None;
        }
        let mut w = (deg as u64) << DEG_SHIFT;
        for (i, e) in exps.iter().enumerate() {
            w |= (*e as u64) << (8 * i);
        }
        Some(Monomial(w))
    }

    #[inline]
    pub fn exp(self, v: Var) -> u32 {
        ((self.0 >> Self::shift(v)) & FIELD_MASK) as u32
    }

    pub fn exponents(self) -> [u32; 6] {
        let mut out = [0u32; 6];
        for v in Var::ALL {
            out[v.index()] = self.exp(v);
        }
        out
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (self.0 >> DEG_SHIFT) as u32
    }

    #[inline]
    pub fn mul(self, o: Monomial) -> Option<Monomial> {
        if self.degree() + o.degree() > Self::MAX_DEGREE {
            return None;
        }
        Some(Monomial(self.0 + o.0))
    }

    /// Product when the caller has already bounded the degrees.
    #[inline]
    pub(crate) fn mul_unchecked(self, o: Monomial) -> Monomial {
        Monomial(self.0 + o.0)
    }

    #[inline]
    pub fn divides(self, o: Monomial) -> bool {
        Var::ALL.iter().all(|&v| self.exp(v) <= o.exp(v))
    }

    /// `o / self` if exact.
    #[inline]
    pub fn quotient_of(self, o: Monomial) -> Option<Monomial> {
        if self.divides(o) {
            Some(Monomial(o.0 - self.0))
        } else {
            None
        }
    }

    pub fn with_exp(self, v: Var, e: u32) -> Option<Monomial> {
        let mut exps = self.exponents();
        exps[v.index()] = e;
        Monomial::from_exponents(exps)
    }

    /// Lower the exponent of `v` by one; the caller guarantees it is positive.
    #[inline]
    pub(crate) fn lower(self, v: Var) -> Monomial {
        debug_assert!(self.exp(v) > 0);
        Monomial(self.0 - (1u64 << DEG_SHIFT) - (1u64 << Self::shift(v)))
    }

    /// Exchange the exponents of a and ā.
    pub fn swap_a(self) -> Monomial {
        let mut exps = self.exponents();
        exps.swap(Var::A.index(), Var::Abar.index());
        Monomial::from_exponents(exps).expect("swap preserves degree")
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", v.surface_name())?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let s = Monomial::var(Var::S);
        let b = Monomial::var(Var::B);
        let s2 = s.mul(s).unwrap();
        assert!(b > s);
        assert!(s2 > b, "higher degree wins");
        let ab = Monomial::var(Var::A).mul(b).unwrap();
        let sb = s.mul(b).unwrap();
        assert!(ab > sb);
    }

    #[test]
    fn division_and_swap() {
        let m = Monomial::from_exponents([1, 0, 2, 1, 0, 0]).unwrap();
        let a = Monomial::var(Var::A);
        assert_eq!(a.quotient_of(m), Monomial::from_exponents([1, 0, 1, 1, 0, 0]));
        assert_eq!(m.swap_a(), Monomial::from_exponents([1, 0, 1, 2, 0, 0]).unwrap());
        assert_eq!(m.to_string(), "sin(alpha)*a^2*abar");
    }

    #[test]
    fn degree_cap() {
        let big = Monomial::from_exponents([200, 0, 0, 0, 0, 0]).unwrap();
        assert!(big.mul(big).is_none());
    }
}
