//! Special functions, quadrature and finite differences shared by the
//! evaluation engine and the operator checks.

mod complex;
pub(crate) mod dd;
mod diff;
mod gamma;
mod quad;

pub use complex::{c, complex_pow, cos_pi, exp_m1, log_sin_pi, real, real_pow, sin_pi, ComplexValue};
pub(crate) use complex::{pow_unchecked, I};
pub use diff::{derivative, derivative_n, GridSpec};
pub use gamma::{gamma, log_gamma, reciprocal_gamma};
pub use quad::{gauss_legendre, integrate_panels, Quadrature, QuadratureSpec};
