//! Evaluation domains.
//!
//! Catalog recipes and jet computations are written once against [`Domain`]
//! and run either on exact rational functions ([`Symbolic`]) or on truncated
//! Taylor series at an exact point ([`series::SeriesDomain`]).

pub mod series;

use std::fmt::Debug;

use crate::error::{EngineError, Result};
use crate::kernel::{DiffVar, GaussianRational, TrigRational, Var};

pub trait Domain: Send + Sync {
    type Elem: Clone + Debug + Send + Sync;

    fn constant(&self, q: &GaussianRational) -> Self::Elem;
    fn var(&self, v: Var) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;
    fn div(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn diff(&self, x: &Self::Elem, v: DiffVar) -> Result<Self::Elem>;
    /// Swap a ↔ ā and conjugate coefficients.
    fn conj(&self, x: &Self::Elem) -> Result<Self::Elem>;
    /// True if the element is identically zero.
    fn is_zero(&self, x: &Self::Elem) -> bool;
    /// True if the element vanishes where the domain is anchored. For the
    /// symbolic domain this is the same as [`Domain::is_zero`].
    fn value_is_zero(&self, x: &Self::Elem) -> bool;
    /// Term count, used in reports.
    fn size(&self, x: &Self::Elem) -> usize;
    /// Short rendering for witnesses.
    fn describe(&self, x: &Self::Elem) -> String;

    fn int(&self, n: i64) -> Self::Elem {
        self.constant(&GaussianRational::from_int(n))
    }

    fn ratio(&self, n: i64, d: i64) -> Self::Elem {
        self.constant(&GaussianRational::from_ratio(n, d))
    }

    fn zero(&self) -> Self::Elem {
        self.int(0)
    }

    fn one(&self) -> Self::Elem {
        self.int(1)
    }

    fn scale(&self, x: &Self::Elem, n: i64, d: i64) -> Result<Self::Elem> {
        self.mul(x, &self.ratio(n, d))
    }
}

/// Exact rational functions over the quotient ring.
#[derive(Clone, Copy, Debug, Default)]
pub struct Symbolic;

impl Domain for Symbolic {
    type Elem = TrigRational;

    fn constant(&self, q: &GaussianRational) -> TrigRational {
        TrigRational::constant(q.clone())
    }
    fn var(&self, v: Var) -> TrigRational {
        TrigRational::var(v)
    }
    fn add(&self, x: &TrigRational, y: &TrigRational) -> Result<TrigRational> {
        x.add(y)
    }
    fn sub(&self, x: &TrigRational, y: &TrigRational) -> Result<TrigRational> {
        x.sub(y)
    }
    fn mul(&self, x: &TrigRational, y: &TrigRational) -> Result<TrigRational> {
        x.mul(y)
    }
    fn div(&self, x: &TrigRational, y: &TrigRational) -> Result<TrigRational> {
        x.div(y)
    }
    fn neg(&self, x: &TrigRational) -> TrigRational {
        x.neg()
    }
    fn diff(&self, x: &TrigRational, v: DiffVar) -> Result<TrigRational> {
        x.differentiate(v)
    }
    fn conj(&self, x: &TrigRational) -> Result<TrigRational> {
        Ok(x.conjugate())
    }
    fn is_zero(&self, x: &TrigRational) -> bool {
        x.is_zero()
    }
    fn value_is_zero(&self, x: &TrigRational) -> bool {
        x.is_zero()
    }
    fn size(&self, x: &TrigRational) -> usize {
        x.term_count()
    }
    fn describe(&self, x: &TrigRational) -> String {
        let s = x.to_string();
        if s.len() > 200 {
            format!("{}... ({} terms)", &s[..s.char_indices().nth(200).map_or(s.len(), |(i, _)| i)], x.term_count())
        } else {
            s
        }
    }
}

/// Map a pole error from a division into the domain-appropriate variant.
pub(crate) fn pole() -> EngineError {
    EngineError::PoleAtPoint
}
