//! The cubic root p23 and the function G along its branches.

use super::complex::{ComplexF, NumConfig};
use super::cubic::{solve_cubic, CubicRoots};
use super::eval::{eval_complex, NumPoint};
use crate::catalog::{Catalog, GTemplate};
use crate::domain::Symbolic;
use crate::error::{EngineError, Result};

/// A root of the cubic with the partner used as conj(P).
#[derive(Clone, Debug)]
pub struct Candidate {
    pub root: ComplexF,
    pub partner: ComplexF,
    pub imag_abs: f64,
    pub non_real: bool,
}

/// Cubic coefficients at a point, plus whether they are real there.
#[derive(Clone, Debug)]
pub struct CubicAt {
    pub coeffs: [ComplexF; 4],
    pub real: bool,
    /// Largest |imag|/|value| among the coefficients.
    pub max_rel_imag: f64,
}

/// Evaluated ingredients of G.
struct GValues {
    p1: ComplexF,
    p2: ComplexF,
    p2bar: ComplexF,
    d_alpha_p2: ComplexF,
    d_a_p2: ComplexF,
    d_abar_p2: ComplexF,
    cubic: [ComplexF; 4],
    d_cubic: [[ComplexF; 4]; 3],
}

/// Exact inputs plus tolerances for everything root-related.
pub struct RootLab {
    pub cfg: NumConfig,
    template: GTemplate,
}

impl RootLab {
    pub fn new(cat: &Catalog<Symbolic>, cfg: NumConfig) -> Result<Self> {
        Ok(RootLab {
            cfg,
            template: cat.g_template()?,
        })
    }

    pub fn template(&self) -> &GTemplate {
        &self.template
    }

    /// Same inputs with a different p18 (and the p20..p22 it induces).
    pub fn with_template(template: GTemplate, cfg: NumConfig) -> Self {
        RootLab { cfg, template }
    }

    pub fn cubic_at(&self, pt: &NumPoint) -> Result<CubicAt> {
        let mut v = Vec::with_capacity(4);
        for e in &self.template.cubic {
            v.push(eval_complex(e, pt, &self.cfg)?);
        }
        let coeffs: [ComplexF; 4] = v.try_into().expect("four coefficients");
        let max_rel_imag = coeffs
            .iter()
            .map(|c| {
                let m = c.abs_f64();
                if m == 0.0 {
                    0.0
                } else {
                    c.im_f64().abs() / m
                }
            })
            .fold(0.0, f64::max);
        Ok(CubicAt {
            real: max_rel_imag < self.cfg.tol_real,
            max_rel_imag,
            coeffs,
        })
    }

    pub fn roots_at(&self, pt: &NumPoint) -> Result<(CubicAt, CubicRoots)> {
        let c = self.cubic_at(pt)?;
        let r = solve_cubic(&c.coeffs[0], &c.coeffs[1], &c.coeffs[2], &c.coeffs[3], &self.cfg)?;
        Ok((c, r))
    }

    /// Non-real roots; at real-coefficient points exactly one conjugate pair.
    pub fn p23_candidates(&self, pt: &NumPoint) -> Result<Vec<Candidate>> {
        let (c, r) = self.roots_at(pt)?;
        let tagged: Vec<(ComplexF, f64, bool)> = r
            .roots
            .iter()
            .map(|z| {
                let im = z.im_f64().abs();
                (z.clone(), im, im > self.cfg.tol_imag * z.abs_f64().max(1.0))
            })
            .collect();
        if tagged.iter().all(|t| !t.2) {
            return Err(EngineError::AllRootsReal);
        }
        if c.real {
            let nr: Vec<_> = tagged.iter().filter(|t| t.2).collect();
            if nr.len() != 2 {
                return Err(EngineError::Domain(format!(
                    "real cubic with {} non-real roots",
                    nr.len()
                )));
            }
            let (x, y) = (&nr[0].0, &nr[1].0);
            return Ok(vec![
                Candidate {
                    root: x.clone(),
                    partner: y.clone(),
                    imag_abs: nr[0].1,
                    non_real: true,
                },
                Candidate {
                    root: y.clone(),
                    partner: x.clone(),
                    imag_abs: nr[1].1,
                    non_real: true,
                },
            ]);
        }
        Ok(tagged
            .into_iter()
            .map(|(z, im, nr)| Candidate {
                partner: z.conj(),
                root: z,
                imag_abs: im,
                non_real: nr,
            })
            .collect())
    }

    fn values(&self, pt: &NumPoint) -> Result<GValues> {
        let t = &self.template;
        let ev = |e| eval_complex(e, pt, &self.cfg);
        let mut d_cubic: [[ComplexF; 4]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| ComplexF::zero(1)));
        for (i, row) in t.d_cubic.iter().enumerate() {
            for (k, e) in row.iter().enumerate() {
                d_cubic[i][k] = ev(e)?;
            }
        }
        Ok(GValues {
            p1: ev(&t.p1)?,
            p2: ev(&t.p2)?,
            p2bar: ev(&t.p2bar)?,
            d_alpha_p2: ev(&t.d_alpha_p2)?,
            d_a_p2: ev(&t.d_a_p2)?,
            d_abar_p2: ev(&t.d_abar_p2)?,
            cubic: [ev(&t.cubic[0])?, ev(&t.cubic[1])?, ev(&t.cubic[2])?, ev(&t.cubic[3])?],
            d_cubic,
        })
    }

    /// 3 p16 P² + 2 p20 P + p21, checked against `tol_den` relative to its terms.
    pub fn derivative_denominator(&self, cubic: &[ComplexF; 4], root: &ComplexF) -> Result<ComplexF> {
        let t2 = cubic[0].scale_int(3).mul(root).mul(root);
        let t1 = cubic[1].scale_int(2).mul(root);
        let dn = t2.add(&t1).add(&cubic[2]);
        let scale = t2.abs_f64() + t1.abs_f64() + cubic[2].abs_f64();
        if dn.is_zero() || dn.abs_f64() <= self.cfg.tol_den * scale {
            return Err(EngineError::DerivativeDenominatorZero);
        }
        Ok(dn)
    }

    /// G at a point for one choice of P and conj(P).
    fn g_value(&self, v: &GValues, root: &ComplexF, partner: &ComplexF) -> Result<ComplexF> {
        let dn = self.derivative_denominator(&v.cubic, root)?;
        let quotient = |row: &[ComplexF; 4]| -> Result<ComplexF> {
            let n = row[0].mul(root).add(&row[1]).mul(root).add(&row[2]).mul(root).add(&row[3]);
            n.div(&dn)
        };
        let p24 = quotient(&v.d_cubic[0])?;
        let p25 = quotient(&v.d_cubic[1])?;
        let p26 = quotient(&v.d_cubic[2])?;
        Ok(v.p1
            .mul(&v.p2)
            .add(&v.d_alpha_p2)
            .sub(&v.p1.sub(&v.d_a_p2).mul(root))
            .add(&v.d_abar_p2.mul(partner))
            .add(&p24)
            .add(&v.p2.mul(&p25))
            .sub(&v.p2bar.sub(&partner.scale_int(2)).mul(&p26)))
    }

    /// G for every candidate root.
    pub fn g_at(&self, pt: &NumPoint) -> Result<Vec<(Candidate, Result<ComplexF>)>> {
        let cands = self.p23_candidates(pt)?;
        let v = self.values(pt)?;
        Ok(cands
            .into_iter()
            .map(|c| {
                let g = self.g_value(&v, &c.root, &c.partner);
                (c, g)
            })
            .collect())
    }
}
