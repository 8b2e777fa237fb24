//! Exact arithmetic and the canonical representation of expressions.

pub mod monomial;
pub mod point;
pub mod poly;
pub mod quadext;
pub mod rational;
pub mod trig;

pub use monomial::{Monomial, Var};
pub use point::{eval_exact, is_zero_sampled, sample_point, AlphaTag, SamplePoint, SampledVerdict};
pub use poly::{Poly, Polynomial};
pub use quadext::QuadExt;
pub use rational::{Coeff, GaussianRational, Rational};
pub use trig::{DiffVar, TrigRational};
