//! Arbitrary-precision reference evaluators: quadrature for `e^-x`-weighted
//! integrals, Gamma, digamma, Euler's constant, and the Euler-Gompertz
//! constant by two independent routes.

mod delta;
mod float;
mod gamma;
mod quadrature;

pub use delta::{delta_reference, delta_value, e1_one, DeltaMethod};
pub use float::{BigFloat, PrecisionContext, DEFAULT_GUARD_DIGITS, MAX_DECIMAL_DIGITS};
pub use gamma::{digamma, euler_gamma, gamma_rat, gamma_real};
pub use quadrature::{integrate, quad_semi_infinite, quad_with_spec, Integrand, QuadratureSpec};
