//! Floating-point side: the cubic root p23, G, non-vanishing scans and the ODE.

pub mod complex;
pub mod cubic;
pub mod eval;
pub mod ode;
pub mod roots;
pub mod scan;

pub use complex::{ComplexF, NumConfig};
pub use cubic::{solve_cubic, CubicRoots};
pub use eval::{alpha_value, eval_complex, NumPoint};
pub use ode::{convergence_orders, OdeProblem, OdeTrajectory};
pub use roots::{Candidate, RootLab};
pub use scan::{nonvanishing_scan, parse_grid, AtSpec, GridPoint, RowStatus, ScanRow, Target};
