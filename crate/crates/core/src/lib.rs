//! Explicit generating functions for Gessel's walks in the quarter plane.
//!
//! Walks use the steps W, NE, E, SW and stay in the quarter plane. The
//! trivariate series `Q(x, y, z) = Σ q(i, j, k) x^i y^j z^k` counts them.
//! It is evaluated from singular contour integrals over the cuts of the
//! kernel's branches. Those integrals involve a conformal gluing function,
//! available both as the root of a cubic and through Weierstrass functions.
//!
//! Module map:
//! - [`kernel`]: kernel polynomial, branch points, branches, cut values, curves.
//! - [`elliptic`]: periods, `℘` lattices, the Möbius map `f` and the cubic's constants.
//! - [`cgf`]: the gluing functions `w`, `w̃` by branch tracking and by `℘`.
//! - [`gfeval`]: the integral formulas and the assembled `Q(x, y, z)`.
//! - [`oracle`]: exact walk counts, the diagonal closed form and series truncation.

pub mod cgf;
pub mod elliptic;
mod error;
pub mod gfeval;
pub mod kernel;
pub mod oracle;
mod point;
pub mod poly;
pub mod quad;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use point::Ext;
