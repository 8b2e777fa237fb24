//! Surface syntax: parsing and rendering.

pub mod parse;
pub mod render;

pub use parse::{lower, parse, parse_expr, Ast};
pub use render::{render, render_poly};
