//! Classical RK4 for a'(α) = p2(α, a, conj a).

use astro_float::{BigFloat, RoundingMode};

use super::complex::{real_to_f64, ComplexF, NumConfig};
use super::eval::{eval_complex, NumPoint};
use crate::error::{EngineError, Result};
use crate::kernel::TrigRational;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Debug)]
pub struct OdeTrajectory {
    /// (α, a) after every accepted step, starting with the initial value.
    pub samples: Vec<(BigFloat, ComplexF)>,
    /// The step actually used: the requested one shrunk to divide the interval.
    pub step: f64,
    pub method: &'static str,
}

impl OdeTrajectory {
    pub fn last(&self) -> &(BigFloat, ComplexF) {
        self.samples.last().expect("initial sample")
    }
}

/// Integration problem: the right-hand side and the fixed parameters.
pub struct OdeProblem<'e> {
    pub p2: &'e TrigRational,
    pub rho: ComplexF,
    pub b: ComplexF,
    /// Denominator magnitude below which a stage counts as hitting a pole.
    pub pole_guard: f64,
    pub cfg: NumConfig,
}

impl<'e> OdeProblem<'e> {
    pub fn new(p2: &'e TrigRational, rho: ComplexF, b: ComplexF, cfg: NumConfig) -> Self {
        OdeProblem {
            p2,
            rho,
            b,
            pole_guard: 1e-12,
            cfg,
        }
    }

    fn rhs(&self, alpha: &BigFloat, a: &ComplexF) -> Result<ComplexF> {
        let pt = NumPoint::at_alpha(alpha, a, &self.rho, &self.b);
        let cfg = NumConfig {
            tol_den: self.pole_guard.max(self.cfg.tol_den),
            ..self.cfg.clone()
        };
        eval_complex(self.p2, &pt, &cfg)
    }

    /// Integrate from α0 to α1 with about `step` per step.
    pub fn integrate(&self, alpha0: &BigFloat, a0: &ComplexF, alpha1: &BigFloat, step: f64) -> Result<OdeTrajectory> {
        let p = self.cfg.precision;
        let span = alpha1.sub(alpha0, p, RM);
        let len = real_to_f64(&span).abs();
        if !(step > 0.0) || !step.is_finite() {
            return Err(EngineError::Config("step must be positive".into()));
        }
        if len == 0.0 {
            return Err(EngineError::Config("empty integration interval".into()));
        }
        let n = (len / step).ceil().max(1.0) as u64;
        let h = span.div(&BigFloat::from_u64(n, p), p, RM);
        let hc = ComplexF::from_real(h.clone(), p);
        let half = BigFloat::from_f64(0.5, p);
        let h2 = h.mul(&half, p, RM);
        let h2c = ComplexF::from_real(h2.clone(), p);
        let sixth = ComplexF::from_int(1, p).div(&ComplexF::from_int(6, p))?;

        let mut samples = vec![(alpha0.clone(), a0.clone())];
        let mut alpha = alpha0.clone();
        let mut a = a0.clone();
        for k in 1..=n {
            let pole = || EngineError::PoleEncountered {
                alpha: format!("{:.17e}", real_to_f64(&alpha)),
            };
            let mid = alpha.add(&h2, p, RM);
            // α advances by exact multiples of h from α0.
            let next = alpha0.add(&h.mul(&BigFloat::from_u64(k, p), p, RM), p, RM);
            let stage = |al: &BigFloat, y: &ComplexF| {
                self.rhs(al, y).map_err(|e| if e.is_pole() { pole() } else { e })
            };
            let k1 = stage(&alpha, &a)?;
            let k2 = stage(&mid, &a.add(&h2c.mul(&k1)))?;
            let k3 = stage(&mid, &a.add(&h2c.mul(&k2)))?;
            let k4 = stage(&next, &a.add(&hc.mul(&k3)))?;
            let incr = k1.add(&k2.scale_int(2)).add(&k3.scale_int(2)).add(&k4);
            a = a.add(&hc.mul(&sixth).mul(&incr));
            alpha = next;
            samples.push((alpha.clone(), a.clone()));
        }
        Ok(OdeTrajectory {
            samples,
            step: real_to_f64(&h).abs(),
            method: "rk4",
        })
    }
}

/// Observed orders over successive halvings of `step`, against a step/64 run.
pub fn convergence_orders(
    problem: &OdeProblem,
    alpha0: &BigFloat,
    a0: &ComplexF,
    alpha1: &BigFloat,
    step: f64,
    halvings: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let reference = problem.integrate(alpha0, a0, alpha1, step / 64.0)?.last().1.clone();
    let mut errors = Vec::new();
    let mut h = step;
    for _ in 0..=halvings {
        let end = problem.integrate(alpha0, a0, alpha1, h)?.last().1.clone();
        errors.push(end.dist_f64(&reference));
        h /= 2.0;
    }
    let orders = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Ok((errors, orders))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_expr;

    fn setup() -> TrigRational {
        parse_expr("(2*a*(abar - b) + 3/2*rho*sin(alpha)^2)*cot(alpha)/(abar + b)").unwrap()
    }

    fn f(x: f64) -> BigFloat {
        BigFloat::from_f64(x, 128)
    }

    #[test]
    fn one_step_matches_derivative() {
        let p2 = setup();
        let cfg = NumConfig::default();
        let prob = OdeProblem::new(&p2, ComplexF::from_int(1, 128), ComplexF::from_int(1, 128), cfg.clone());
        let a0 = ComplexF::from_f64(0.25, 0.5, 128).unwrap();
        let slope = prob.rhs(&f(0.9), &a0).unwrap();
        let mut prev = f64::INFINITY;
        for h in [1e-2, 1e-3, 1e-4] {
            let t = prob.integrate(&f(0.9), &a0, &f(0.9 + h), h).unwrap();
            let fd = t.last().1.sub(&a0).mul(&ComplexF::from_f64(1.0 / h, 0.0, 128).unwrap());
            let err = fd.dist_f64(&slope);
            assert!(err < prev / 5.0, "h={h}: {err}");
            prev = err;
        }
    }

    #[test]
    fn crosses_half_pi() {
        let p2 = setup();
        let prob = OdeProblem::new(&p2, ComplexF::from_int(1, 128), ComplexF::from_int(1, 128), NumConfig::default());
        let t = prob.integrate(&f(1.2), &ComplexF::zero(128), &f(1.9), 0.05).unwrap();
        assert_eq!(t.samples.len(), 15);
        for w in t.samples.windows(2) {
            assert!(w[1].0 > w[0].0);
        }
    }

    #[test]
    fn pole_stops_integration() {
        let p2 = setup();
        let prob = OdeProblem::new(&p2, ComplexF::from_int(1, 128), ComplexF::from_int(1, 128), NumConfig::default());
        let e = prob.integrate(&f(0.5), &ComplexF::zero(128), &f(-0.5), 0.25).unwrap_err();
        assert!(matches!(e, EngineError::PoleEncountered { .. }), "{e:?}");
    }
}
