//! Roots of complex cubics from the eigenvalues of the companion matrix.

use super::complex::{ComplexF, NumConfig};
use crate::error::{EngineError, Result};

/// Three roots with multiplicity and their relative backward errors.
#[derive(Clone, Debug)]
pub struct CubicRoots {
    pub roots: [ComplexF; 3],
    /// |c3 r³ + c2 r² + c1 r + c0| / (|c3||r|³ + |c2||r|² + |c1||r| + |c0|).
    pub residuals: [f64; 3],
}

impl CubicRoots {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    /// Every root has a partner (possibly itself) within `tol` of its conjugate.
    pub fn conjugate_closed(&self, tol: f64) -> bool {
        self.roots.iter().all(|r| {
            let scale = r.abs_f64().max(1.0);
            self.roots.iter().any(|q| q.dist_f64(&r.conj()) <= tol * scale)
        })
    }
}

fn horner(c: &[ComplexF; 4], x: &ComplexF) -> ComplexF {
    c[0].mul(x).add(&c[1]).mul(x).add(&c[2]).mul(x).add(&c[3])
}

fn backward_error(c: &[ComplexF; 4], x: &ComplexF) -> f64 {
    let r = x.abs_f64();
    let scale = c[0].abs_f64() * r * r * r + c[1].abs_f64() * r * r + c[2].abs_f64() * r + c[3].abs_f64();
    let v = horner(c, x).abs_f64();
    if scale == 0.0 {
        v
    } else {
        v / scale
    }
}

/// Solve c3 X³ + c2 X² + c1 X + c0 = 0.
pub fn solve_cubic(c3: &ComplexF, c2: &ComplexF, c1: &ComplexF, c0: &ComplexF, cfg: &NumConfig) -> Result<CubicRoots> {
    let big = [c2, c1, c0].iter().map(|c| c.abs_f64()).fold(0.0, f64::max);
    let lead = c3.abs_f64();
    if lead == 0.0 || lead <= cfg.tol_lead * big {
        return Err(EngineError::DegenerateLeadingCoefficient);
    }
    let b2 = c2.div(c3)?;
    let b1 = c1.div(c3)?;
    let b0 = c0.div(c3)?;
    let p = cfg.precision;
    let zero = ComplexF::zero(p);
    let one = ComplexF::from_int(1, p);
    let mut h = [
        [b2.neg(), b1.neg(), b0.neg()],
        [one.clone(), zero.clone(), zero.clone()],
        [zero.clone(), one, zero],
    ];
    let eig = hessenberg_eigenvalues(&mut h, p)?;
    let coeffs = [c3.clone(), c2.clone(), c1.clone(), c0.clone()];
    let deriv = [
        ComplexF::zero(p),
        c3.scale_int(3),
        c2.scale_int(2),
        c1.clone(),
    ];
    let mut roots = eig.clone();
    let mut residuals = [0.0; 3];
    for (k, r) in eig.iter().enumerate() {
        let before = backward_error(&coeffs, r);
        let mut best = (r.clone(), before);
        let fp = horner(&deriv, r);
        if !fp.is_zero() {
            if let Ok(step) = horner(&coeffs, r).div(&fp) {
                let cand = r.sub(&step);
                let after = backward_error(&coeffs, &cand);
                if after < before {
                    best = (cand, after);
                }
            }
        }
        roots[k] = best.0;
        residuals[k] = best.1;
    }
    Ok(CubicRoots { roots, residuals })
}

/// Complex Givens rotation (c real, s complex) zeroing `y` in (x, y).
fn givens(x: &ComplexF, y: &ComplexF, p: usize) -> (ComplexF, ComplexF) {
    let nx = x.abs();
    let ny = y.abs();
    let rm = astro_float::RoundingMode::ToEven;
    let norm = nx.mul(&nx, p, rm).add(&ny.mul(&ny, p, rm), p, rm).sqrt(p, rm);
    if norm.is_zero() {
        return (ComplexF::from_int(1, p), ComplexF::zero(p));
    }
    if nx.is_zero() {
        // Swap: c = 0, s = conj(y)/|y|.
        let s = y.conj().div(&ComplexF::from_real(ny, p)).unwrap_or_else(|_| ComplexF::zero(p));
        return (ComplexF::zero(p), s);
    }
    let c = nx.div(&norm, p, rm);
    // s = (x/|x|) conj(y) / norm.
    let phase = x.div(&ComplexF::from_real(nx, p)).expect("nonzero");
    let s = phase.mul(&y.conj()).div(&ComplexF::from_real(norm, p)).expect("nonzero");
    (ComplexF::from_real(c, p), s)
}

/// Eigenvalues of an upper Hessenberg 3×3 matrix by shifted QR with deflation.
fn hessenberg_eigenvalues(h: &mut [[ComplexF; 3]; 3], p: usize) -> Result<[ComplexF; 3]> {
    let eps = 2f64.powi(-(p as i32) + 4);
    let mut out: [Option<ComplexF>; 3] = [None, None, None];
    let mut hi = 2usize;
    let mut iters = 0usize;
    loop {
        if hi == 0 {
            out[0] = Some(h[0][0].clone());
            break;
        }
        // Lowest row of the active block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[lo][lo - 1].abs_f64();
            let diag = h[lo][lo].abs_f64() + h[lo - 1][lo - 1].abs_f64();
            if sub <= eps * diag.max(f64::MIN_POSITIVE) {
                h[lo][lo - 1] = ComplexF::zero(p);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out[hi] = Some(h[hi][hi].clone());
            hi -= 1;
            iters = 0;
            continue;
        }
        iters += 1;
        if iters > 200 {
            return Err(EngineError::Domain("companion QR did not converge".into()));
        }
        let mu = if iters % 11 == 0 {
            // Exceptional shift.
            h[hi][hi].add(&ComplexF::from_f64(h[hi][hi - 1].abs_f64() * 0.75, 0.0, p)?)
        } else {
            wilkinson(&h[hi - 1][hi - 1], &h[hi - 1][hi], &h[hi][hi - 1], &h[hi][hi])
        };
        qr_step(h, lo, hi, &mu, p);
    }
    Ok([
        out[0].take().unwrap(),
        out[1].take().unwrap(),
        out[2].take().unwrap(),
    ])
}

/// Eigenvalue of [[a, b], [c, d]] closer to d.
fn wilkinson(a: &ComplexF, b: &ComplexF, c: &ComplexF, d: &ComplexF) -> ComplexF {
    let p = a.precision();
    let half = ComplexF::from_f64(0.5, 0.0, p).expect("finite");
    let m = a.add(d).mul(&half);
    let q = a.sub(d).mul(&half);
    let disc = q.mul(&q).add(&b.mul(c)).sqrt();
    let l1 = m.add(&disc);
    let l2 = m.sub(&disc);
    if l1.dist_f64(d) <= l2.dist_f64(d) {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR step on rows/columns lo..=hi.
fn qr_step(h: &mut [[ComplexF; 3]; 3], lo: usize, hi: usize, mu: &ComplexF, p: usize) {
    for k in lo..=hi {
        h[k][k] = h[k][k].sub(mu);
    }
    let mut rots = Vec::new();
    for k in lo..hi {
        let (c, s) = givens(&h[k][k], &h[k + 1][k], p);
        // Rows k, k+1: [c s; -conj(s) c].
        for j in lo..=hi {
            let x = h[k][j].clone();
            let y = h[k + 1][j].clone();
            h[k][j] = c.mul(&x).add(&s.mul(&y));
            h[k + 1][j] = s.conj().neg().mul(&x).add(&c.mul(&y));
        }
        rots.push((k, c, s));
    }
    for (k, c, s) in rots {
        // Columns k, k+1 by the conjugate transpose.
        for i in lo..=hi {
            let x = h[i][k].clone();
            let y = h[i][k + 1].clone();
            h[i][k] = x.mul(&c).add(&y.mul(&s.conj()));
            h[i][k + 1] = x.mul(&s.neg()).add(&y.mul(&c));
        }
    }
    for k in lo..=hi {
        h[k][k] = h[k][k].add(mu);
    }
}
