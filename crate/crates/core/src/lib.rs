//! Exact verification engine for the structure functions of parallel mean
//! curvature surfaces in complex space forms.

pub mod catalog;
pub mod domain;
pub mod error;
pub mod jet;
pub mod kernel;
pub mod lang;
pub mod numeric;
pub mod verify;

pub use error::{EngineError, Result};
