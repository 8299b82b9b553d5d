use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::BigRat;
use crate::reference::{BigFloat, PrecisionContext};

/// `const_part + delta_part * delta`, an element of the Q-span of `{1, delta}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaLinear {
    pub const_part: BigRat,
    pub delta_part: BigRat,
}

impl DeltaLinear {
    pub fn new(const_part: BigRat, delta_part: BigRat) -> Self {
        Self { const_part, delta_part }
    }

    pub fn zero() -> Self {
        Self::new(BigRat::zero(), BigRat::zero())
    }

    /// The constant `delta` itself.
    pub fn delta() -> Self {
        Self::new(BigRat::zero(), BigRat::one())
    }

    pub fn constant(c: BigRat) -> Self {
        Self::new(c, BigRat::zero())
    }

    pub fn scale(&self, k: &BigRat) -> Self {
        Self::new(&self.const_part * k, &self.delta_part * k)
    }

    pub fn is_zero(&self) -> bool {
        self.const_part.is_zero() && self.delta_part.is_zero()
    }

    pub fn eval(&self, delta_value: &BigFloat, ctx: &PrecisionContext) -> BigFloat {
        delta_linear_eval(self, delta_value, ctx)
    }
}

/// `const_part + delta_part * delta_value` at the context's working precision.
pub fn delta_linear_eval(v: &DeltaLinear, delta_value: &BigFloat, ctx: &PrecisionContext) -> BigFloat {
    let c = ctx.rat(&v.const_part);
    if v.delta_part.is_zero() {
        return c;
    }
    // Both parts can be huge with opposite signs; carry extra bits for the
    // cancellation between them.
    let bits = ctx.working_bits() + 64;
    let d = BigFloat::from_rat(&v.delta_part, bits) * delta_value.with_prec(bits);
    (BigFloat::from_rat(&v.const_part, bits) + d).with_prec(ctx.working_bits())
}

impl Add for DeltaLinear {
    type Output = DeltaLinear;
    fn add(self, rhs: DeltaLinear) -> DeltaLinear {
        &self + &rhs
    }
}

impl Add<&DeltaLinear> for &DeltaLinear {
    type Output = DeltaLinear;
    fn add(self, rhs: &DeltaLinear) -> DeltaLinear {
        DeltaLinear::new(&self.const_part + &rhs.const_part, &self.delta_part + &rhs.delta_part)
    }
}

impl AddAssign<&DeltaLinear> for DeltaLinear {
    fn add_assign(&mut self, rhs: &DeltaLinear) {
        self.const_part += &rhs.const_part;
        self.delta_part += &rhs.delta_part;
    }
}

impl Sub for DeltaLinear {
    type Output = DeltaLinear;
    fn sub(self, rhs: DeltaLinear) -> DeltaLinear {
        &self - &rhs
    }
}

impl Sub<&DeltaLinear> for &DeltaLinear {
    type Output = DeltaLinear;
    fn sub(self, rhs: &DeltaLinear) -> DeltaLinear {
        DeltaLinear::new(&self.const_part - &rhs.const_part, &self.delta_part - &rhs.delta_part)
    }
}

impl Neg for DeltaLinear {
    type Output = DeltaLinear;
    fn neg(self) -> DeltaLinear {
        DeltaLinear::new(-self.const_part, -self.delta_part)
    }
}

impl Mul<&BigRat> for &DeltaLinear {
    type Output = DeltaLinear;
    fn mul(self, k: &BigRat) -> DeltaLinear {
        self.scale(k)
    }
}

impl fmt::Display for DeltaLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})*delta", self.const_part, self.delta_part)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int_rat, rat};
    use proptest::prelude::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(30).unwrap()
    }

    fn delta_ref(ctx: &PrecisionContext) -> BigFloat {
        BigFloat::parse_decimal(
            "0.596347362323194074341078499369279376074177860152548781573484910482327219115",
            ctx.working_bits(),
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        let ctx = ctx();
        let d = BigFloat::parse_decimal("0.5963473623", ctx.working_bits()).unwrap();
        assert_eq!(DeltaLinear::delta().eval(&d, &ctx), d);
        let v = DeltaLinear::new(int_rat(1), int_rat(-1)).eval(&delta_ref(&ctx), &ctx);
        assert_eq!(v.to_decimal_string(10), "0.4036526377");
        assert!(DeltaLinear::zero().eval(&d, &ctx).is_zero());
    }

    #[test]
    fn one_minus_delta_plus_delta_is_one() {
        let ctx = ctx();
        let d = delta_ref(&ctx);
        let v = DeltaLinear::new(int_rat(1), int_rat(-1)).eval(&d, &ctx) + &d;
        assert!((v - ctx.one()).abs() < ctx.output_tolerance());
    }

    fn small_rat() -> impl Strategy<Value = BigRat> {
        (-1000i64..1000, 1i64..200).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn eval_distributes_over_addition_and_scaling(
            a in small_rat(), b in small_rat(), c in small_rat(), d in small_rat(), k in small_rat()
        ) {
            let ctx = ctx();
            let dv = delta_ref(&ctx);
            let x = DeltaLinear::new(a, b);
            let y = DeltaLinear::new(c, d);
            let lhs = (&x + &y).scale(&k).eval(&dv, &ctx);
            let rhs = (x.eval(&dv, &ctx) + y.eval(&dv, &ctx)) * ctx.rat(&k);
            let scale = lhs.abs() + ctx.one();
            prop_assert!((lhs - rhs).abs() <= ctx.output_tolerance() * scale);
        }
    }
}
