//! Solvers for nonlocal conservation laws `∂t u + div(u V(t, x, u ∗ η)) = 0`
//! with rough (BV or Sobolev) convolution kernels.
//!
//! [`lagrangian`] moves particles along characteristics, [`eulerian`] is a
//! 1D upwind cross-check, and [`analysis`] turns run histories into
//! existence bounds, flow-distance functionals and concentration reports.

pub mod analysis;
pub mod datum;
pub mod diagnostics;
pub mod eulerian;
pub mod fields;
pub mod kernels;
pub mod lagrangian;
pub mod quad;
pub mod scenario;
pub mod velocity;
