use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid precision: {digits} digits with {guard} guard digits (need digits >= 1, guard >= 5)")]
    InvalidPrecision { digits: u32, guard: u32 },

    #[error("precision unreachable: {requested} digits requested, cap is {cap}")]
    PrecisionUnreachable { requested: u32, cap: u32 },

    #[error("integrand is not integrable at the origin: {0}")]
    NonIntegrable(String),

    #[error("pole of the Gamma function at {0}")]
    Pole(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("delta evaluators disagree: quadrature {quadrature} vs e*E1(1) {series}")]
    CrossCheckFailure { quadrature: String, series: String },

    #[error("rising factorial in the denominator vanishes at term {0}")]
    ZeroDenominator(usize),

    #[error("inverted generalized binomial is zero: {0}")]
    DegenerateDenominator(String),

    #[error("degenerate identity instance: {0}")]
    DegenerateCase(String),

    #[error("exact sum did not reduce to an integer: {0}")]
    IntegralityViolation(String),
}
