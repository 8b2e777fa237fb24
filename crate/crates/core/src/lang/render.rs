use std::fmt::Write;

use dashu_int::ops::Abs;
use dashu_ratio::RBig;

use crate::kernel::monomial::Monomial;
use crate::kernel::poly::Polynomial;
use crate::kernel::rational::{Coeff, GaussianRational};
use crate::kernel::trig::TrigRational;

/// Something that can print itself as a product factor.
pub trait RenderMonomial: Copy {
    fn is_one(&self) -> bool;
    fn render(&self) -> String;
}

impl RenderMonomial for Monomial {
    fn is_one(&self) -> bool {
        Monomial::is_one(*self)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

/// `(sign, magnitude)` where the magnitude prints without a leading minus.
fn split_sign(c: &GaussianRational) -> (bool, GaussianRational) {
    if c.im.is_zero() {
        (c.re < RBig::ZERO, GaussianRational::real(c.re.clone().abs()))
    } else if c.re.is_zero() {
        (c.im < RBig::ZERO, GaussianRational::new(RBig::ZERO, c.im.clone().abs()))
    } else {
        (false, c.clone())
    }
}

fn coeff_factor(c: &GaussianRational) -> String {
    if !c.re.is_zero() && !c.im.is_zero() {
        format!("({})", c)
    } else {
        c.to_string()
    }
}

/// Print a sum of `coeff * monomial` terms in the surface syntax.
pub fn render_terms<M: RenderMonomial>(terms: &[(M, GaussianRational)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in terms.iter().enumerate() {
        let (negative, mag) = split_sign(c);
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&coeff_factor(&mag));
        } else if mag.is_one() {
            out.push_str(&m.render());
        } else {
            let _ = write!(out, "{}*{}", coeff_factor(&mag), m.render());
        }
    }
    out
}

pub fn render_poly(p: &Polynomial<GaussianRational>) -> String {
    render_terms(p.terms())
}

/// Deterministic rendering: numerator over the product of denominator factors.
pub fn render(e: &TrigRational) -> String {
    let num = render_poly(e.num());
    let factors = e.den_factors();
    if factors.is_empty() {
        return num;
    }
    let num = if e.num().len() > 1 { format!("({num})") } else { num };
    let parts: Vec<String> = factors
        .iter()
        .map(|f| {
            let body = render_poly(&f.poly);
            let body = if f.poly.len() > 1 { format!("({body})") } else { body };
            if f.exp > 1 {
                format!("{body}^{}", f.exp)
            } else {
                body
            }
        })
        .collect();
    let f0 = &factors[0];
    let atomic = f0.poly.len() > 1 || f0.poly.terms()[0].0.degree() == 1;
    if parts.len() == 1 && atomic {
        format!("{num}/{}", parts[0])
    } else {
        format!("{num}/({})", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Var;

    #[test]
    fn cot_renders_as_ratio() {
        let e = TrigRational::var(Var::C).div(&TrigRational::var(Var::S)).unwrap();
        assert_eq!(render(&e), "cos(alpha)/sin(alpha)");
        assert_eq!(render(&TrigRational::zero()), "0");
    }

    #[test]
    fn signs_and_fractions() {
        let a = TrigRational::var(Var::A);
        let b = TrigRational::var(Var::B);
        let e = a.sub(&b).unwrap().scale(&GaussianRational::from_ratio(-3, 2));
        assert_eq!(render(&e), "3/2*b - 3/2*a");
        let q = a.div(&a.add(&b).unwrap().pow(2).unwrap()).unwrap();
        assert_eq!(render(&q), "a/(b + a)^2");
    }
}
