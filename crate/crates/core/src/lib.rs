//! Rational approximants for the Euler-Gompertz constant
//! `delta = int_0^inf ln(1+x) e^-x dx`, exact checks of the summation
//! identities behind them, and arbitrary-precision reference evaluators.

pub mod approximants;
pub mod error;
pub mod exactmath;
pub mod integrals;
pub mod reference;
pub mod verify;

pub use error::{Error, Result};
pub use exactmath::{BigRat, DeltaLinear};
pub use reference::{BigFloat, PrecisionContext};
