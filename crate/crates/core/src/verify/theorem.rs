use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{binom_int, factorial, BigRat, DeltaLinear};
use crate::integrals::{j_closed, theorem_integral_quadrature};
use crate::reference::{delta_value, BigFloat, PrecisionContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SumPath {
    /// `u = 1`, `k >= 1` terms are exact elements of `Q + Q delta`.
    Exact,
    /// Every integral by quadrature.
    Quadrature,
}

/// `C(m,k) C(k,r) (-1)^(k+r) / k!`
fn coefficient(m: u32, k: u32, r: u32) -> BigRat {
    let c = BigRat::new(
        binom_int(m as u64, k as i64) * binom_int(k as u64, r as i64),
        factorial(k as usize),
    );
    if (k + r) % 2 == 1 {
        -c
    } else {
        c
    }
}

/// `S_m` for `m = r ..= big_m`, in order. Each m-block is accumulated with
/// exact coefficients and rounded once.
pub fn theorem_partial_sums(
    u: &BigRat,
    r: u32,
    big_m: u32,
    path: SumPath,
    ctx: &PrecisionContext,
) -> Result<Vec<BigFloat>> {
    if u.is_negative() {
        return Err(Error::Domain(format!("u must be >= 0, got {u}")));
    }
    if big_m < r {
        return Err(Error::Domain(format!("need M >= r, got M = {big_m}, r = {r}")));
    }
    if u.is_zero() {
        return Ok(vec![ctx.zero(); (big_m - r + 1) as usize]);
    }
    let exact = path == SumPath::Exact && u.is_one();
    // block terms reach about 3^m in size before cancelling to O(1)
    let work = ctx.raised((big_m as f64 * 3f64.log10()).ceil() as u32 + 5);
    let bits = work.working_bits();
    let delta = delta_value(&work);
    let mut integrals = Vec::with_capacity(big_m as usize + 1);
    for k in 0..=big_m {
        if exact && k >= 1 {
            integrals.push(None);
        } else if k >= r {
            integrals.push(Some(theorem_integral_quadrature(k, u, &work)?));
        } else {
            integrals.push(None);
        }
    }
    let exact_values: Vec<DeltaLinear> = if exact {
        (0..big_m as usize).map(j_closed).collect()
    } else {
        Vec::new()
    };
    let mut total = BigFloat::zero(bits);
    let mut out = Vec::new();
    for m in r..=big_m {
        let mut block_exact = DeltaLinear::zero();
        let mut block_float = BigFloat::zero(bits);
        for k in r..=m {
            let c = coefficient(m, k, r);
            if exact && k >= 1 {
                block_exact += &exact_values[k as usize - 1].scale(&c);
            } else {
                let v = integrals[k as usize].as_ref().expect("integral computed");
                block_float = block_float + BigFloat::from_rat(&c, bits) * v;
            }
        }
        let block = BigFloat::from_rat(&block_exact.const_part, bits)
            + BigFloat::from_rat(&block_exact.delta_part, bits) * &delta
            + block_float;
        total = total + block;
        out.push(total.with_prec(ctx.working_bits()));
    }
    Ok(out)
}

/// `S_M(u, r) = sum_{m=r}^M sum_{k=r}^m C(m,k) C(k,r) (-1)^(k+r)/k! int x^(k-1) e^-x ln(x u + 1) dx`,
/// through the exact path whenever `u = 1`.
pub fn theorem_partial_sum(u: &BigRat, r: u32, big_m: u32, ctx: &PrecisionContext) -> Result<BigFloat> {
    let sums = theorem_partial_sums(u, r, big_m, SumPath::Exact, ctx)?;
    Ok(sums.last().cloned().unwrap_or_else(|| ctx.zero()))
}
