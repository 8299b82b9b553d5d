use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::float::{BigFloat, PrecisionContext};
use super::gamma::euler_gamma;
use super::quadrature::{quad_semi_infinite, Integrand};
use crate::error::{Error, Result};
use crate::exactmath::int_rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeltaMethod {
    /// Integrate `ln(1+x) e^-x` directly.
    Quadrature,
    /// `e * E1(1)` with `E1(1) = -gamma + sum_{k>=1} (-1)^(k+1) / (k k!)`.
    ETimesE1,
    /// Both of the above; fails if they disagree beyond `10^-decimal_digits`.
    CrossValidated,
}

/// `E1(1)`. The series is summed exactly in rationals until the next term is
/// below the internal tolerance.
pub fn e1_one(ctx: &PrecisionContext) -> BigFloat {
    let tol = ctx.tolerance().mul_pow2(-8);
    let bits = ctx.working_bits() + 16;
    let mut sum = num_rational::BigRational::zero();
    let mut k_fact = BigInt::one();
    let mut k = 1u64;
    loop {
        k_fact *= k;
        let den = &k_fact * k;
        let term = num_rational::BigRational::new(BigInt::one(), den.clone());
        if BigFloat::from_ratio(&BigInt::one(), &den, bits) < tol {
            break;
        }
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
        k += 1;
    }
    (BigFloat::from_rat(&sum, bits) - euler_gamma(ctx).with_prec(bits)).with_prec(ctx.working_bits())
}

fn delta_series(ctx: &PrecisionContext) -> BigFloat {
    let e = ctx.one().exp();
    e * e1_one(ctx)
}

fn delta_quadrature(ctx: &PrecisionContext) -> Result<BigFloat> {
    quad_semi_infinite(&Integrand::power_log(int_rat(0), int_rat(1)), ctx)
}

/// The Euler-Gompertz constant at the context's working precision.
pub fn delta_reference(ctx: &PrecisionContext, method: DeltaMethod) -> Result<BigFloat> {
    match method {
        DeltaMethod::Quadrature => delta_quadrature(ctx),
        DeltaMethod::ETimesE1 => Ok(delta_series(ctx)),
        DeltaMethod::CrossValidated => {
            let q = delta_quadrature(ctx)?;
            let s = delta_series(ctx);
            if (&q - &s).abs() >= ctx.output_tolerance() {
                let digits = ctx.decimal_digits() + 5;
                return Err(Error::CrossCheckFailure {
                    quadrature: q.to_decimal_string(digits),
                    series: s.to_decimal_string(digits),
                });
            }
            Ok(s)
        }
    }
}

/// `delta` via `e * E1(1)`, memoized per precision context.
pub fn delta_value(ctx: &PrecisionContext) -> BigFloat {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), BigFloat>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (ctx.decimal_digits(), ctx.guard_digits());
    if let Some(v) = cache.lock().expect("delta cache poisoned").get(&key) {
        return v.clone();
    }
    let v = delta_series(ctx);
    cache.lock().expect("delta cache poisoned").insert(key, v.clone());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::DeltaLinear;

    #[test]
    fn cross_validated_digits() {
        let ctx = PrecisionContext::new(10).unwrap();
        let d = delta_reference(&ctx, DeltaMethod::CrossValidated).unwrap();
        assert_eq!(d.to_decimal_string(10), "0.5963473623");
        let q = delta_reference(&ctx, DeltaMethod::Quadrature).unwrap();
        let s = delta_reference(&ctx, DeltaMethod::ETimesE1).unwrap();
        assert!((q - s).abs() < ctx.output_tolerance());
    }

    #[test]
    fn one_minus_delta_plus_delta() {
        let ctx = PrecisionContext::new(30).unwrap();
        let d = delta_reference(&ctx, DeltaMethod::ETimesE1).unwrap();
        let v = DeltaLinear::new(int_rat(1), int_rat(-1)).eval(&d, &ctx) + &d;
        assert!((v - ctx.one()).abs() < ctx.output_tolerance());
    }

    #[test]
    fn e1_one_value() {
        let ctx = PrecisionContext::new(30).unwrap();
        let expect = BigFloat::parse_decimal(
            "0.219383934395520273677163775460121649031047293406908207577978613073568698559",
            ctx.working_bits(),
        )
        .unwrap();
        assert!((e1_one(&ctx) - expect).abs() < ctx.output_tolerance());
    }
}
