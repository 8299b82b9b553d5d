//! The integral families
//!
//! ```text
//! I_n = int_0^inf x^n e^-x / (x + 1) dx
//! J_n = int_0^inf x^n ln(x + 1) e^-x dx
//! ```
//!
//! both of which lie in `Q + Q delta`, plus numeric evaluation of
//! `int_0^inf x^(k-1) e^-x ln(x u + 1) dx` for rational `u`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{alt_factorial_sum, factorial, int_rat, sign_pow, BigRat, DeltaLinear};
use crate::reference::{delta_value, quad_semi_infinite, BigFloat, Integrand, PrecisionContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    ClosedForm,
    Recurrence,
    Quadrature,
}

#[derive(Clone, Debug, PartialEq)]
pub enum IntegralKind {
    Exact(DeltaLinear),
    Numeric(BigFloat),
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralValue {
    pub value: IntegralKind,
    pub provenance: Provenance,
}

impl IntegralValue {
    pub fn exact(&self) -> Option<&DeltaLinear> {
        match &self.value {
            IntegralKind::Exact(v) => Some(v),
            IntegralKind::Numeric(_) => None,
        }
    }

    /// Numeric value; exact values are evaluated against the reference `delta`.
    pub fn to_float(&self, ctx: &PrecisionContext) -> BigFloat {
        match &self.value {
            IntegralKind::Exact(v) => v.eval(&delta_value(ctx), ctx),
            IntegralKind::Numeric(v) => v.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `x^n e^-x / (x + 1)`
    I,
    /// `x^n ln(x + 1) e^-x`
    J,
}

/// `I_n = (-1)^n (sum_{j<n} j! (-1)^(j+1) + delta)`.
pub fn i_closed(n: usize) -> DeltaLinear {
    let s = int_rat(sign_pow(n as i64));
    DeltaLinear::new(int_rat(-alt_factorial_sum(n)) * &s, s)
}

/// `I_0 = delta`, `I_n = (n-1)! - I_(n-1)`.
pub fn i_recurrence(n: usize) -> DeltaLinear {
    let mut acc = DeltaLinear::delta();
    let mut fact = BigInt::one();
    for k in 1..=n {
        if k > 1 {
            fact *= k - 1;
        }
        acc = DeltaLinear::constant(int_rat(fact.clone())) - acc;
    }
    acc
}

/// `J_n = sum_{j=0}^n n!/j! (-1)^j (sum_{i<j} i! (-1)^(i+1) + delta)`.
pub fn j_closed(n: usize) -> DeltaLinear {
    let n_fact = factorial(n);
    let mut const_part = BigInt::zero();
    let mut delta_part = BigInt::zero();
    // n!/j! built downward from j = n
    let mut ratio = BigInt::one();
    for j in (0..=n).rev() {
        if j < n {
            ratio *= j + 1;
        }
        let signed = if j % 2 == 0 { ratio.clone() } else { -ratio.clone() };
        const_part -= &signed * alt_factorial_sum(j);
        delta_part += &signed;
    }
    debug_assert_eq!(ratio, n_fact);
    DeltaLinear::new(int_rat(const_part), int_rat(delta_part))
}

/// `J_n` by integration by parts: `J_0 = delta`, `J_n = n J_(n-1) + I_n`.
pub fn j_recurrence(n: usize) -> DeltaLinear {
    let mut acc = DeltaLinear::delta();
    for k in 1..=n {
        acc = acc.scale(&int_rat(k as i64)) + i_recurrence(k);
    }
    acc
}

/// Quadrature value of `I_n` or `J_n`.
pub fn quadrature(family: Family, n: usize, ctx: &PrecisionContext) -> Result<BigFloat> {
    let exponent = int_rat(n as i64);
    let integrand = match family {
        Family::I => Integrand::power_rational(exponent, BigRat::one(), 1),
        Family::J => Integrand::power_log(exponent, BigRat::one()),
    };
    quad_semi_infinite(&integrand, ctx)
}

pub fn integral_value(
    family: Family,
    n: usize,
    provenance: Provenance,
    ctx: &PrecisionContext,
) -> Result<IntegralValue> {
    let value = match (family, provenance) {
        (Family::I, Provenance::ClosedForm) => IntegralKind::Exact(i_closed(n)),
        (Family::I, Provenance::Recurrence) => IntegralKind::Exact(i_recurrence(n)),
        (Family::J, Provenance::ClosedForm) => IntegralKind::Exact(j_closed(n)),
        (Family::J, Provenance::Recurrence) => IntegralKind::Exact(j_recurrence(n)),
        (_, Provenance::Quadrature) => IntegralKind::Numeric(quadrature(family, n, ctx)?),
    };
    Ok(IntegralValue { value, provenance })
}

type QuadKey = (u32, u32, BigRat, u32, u32);

fn log_quadrature(k: u32, u: &BigRat, ctx: &PrecisionContext) -> Result<BigFloat> {
    static CACHE: OnceLock<Mutex<HashMap<QuadKey, BigFloat>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (k, 0, u.clone(), ctx.decimal_digits(), ctx.guard_digits());
    if let Some(v) = cache.lock().expect("quadrature cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let v = quad_semi_infinite(&Integrand::power_log(int_rat(k as i64 - 1), u.clone()), ctx)?;
    cache.lock().expect("quadrature cache poisoned").insert(key, v.clone());
    Ok(v)
}

/// `int_0^inf x^(k-1) e^-x ln(x u + 1) dx` by quadrature, for any `k >= 0`.
pub fn theorem_integral_quadrature(k: u32, u: &BigRat, ctx: &PrecisionContext) -> Result<BigFloat> {
    if u.is_negative() {
        return Err(Error::Domain(format!("u must be >= 0, got {u}")));
    }
    if u.is_zero() {
        return Ok(ctx.zero());
    }
    log_quadrature(k, u, ctx)
}

/// `int_0^inf x^(k-1) e^-x ln(x u + 1) dx`.
///
/// At `u = 1` and `k >= 1` this is `J_(k-1)`, evaluated exactly and then
/// against the reference `delta`. `k = 0` goes through quadrature.
pub fn theorem_integral(k: u32, u: &BigRat, ctx: &PrecisionContext) -> Result<BigFloat> {
    if u.is_one() && k >= 1 {
        return Ok(j_closed(k as usize - 1).eval(&delta_value(ctx), ctx));
    }
    theorem_integral_quadrature(k, u, ctx)
}

/// `int_0^inf x^(k-1) e^-x ln((x + u) / u) dx`, i.e. the previous integral at `1/u`.
pub fn conjecture_integral(k: u32, u: &BigRat, ctx: &PrecisionContext) -> Result<BigFloat> {
    if !u.is_positive() {
        return Err(Error::Domain(format!("u must be > 0, got {u}")));
    }
    theorem_integral(k, &u.recip(), ctx)
}
