use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactmath::{
    bernoulli_with, binom_int, factorial, int_rat, stirling1_unsigned, stirling2, BernoulliConvention, BigRat,
};
use crate::integrals::conjecture_integral;
use crate::reference::{digamma, BigFloat, PrecisionContext};

/// `sum_{j=1}^w (-1)^j B_j [w j]`
fn inner(w: usize, convention: BernoulliConvention) -> BigRat {
    let mut s = BigRat::zero();
    for j in 1..=w {
        let term = bernoulli_with(j, convention) * int_rat(stirling1_unsigned(w, j));
        if j % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    s
}

/// `A_(k,m) = sum_{t=2}^m {m t} sum_{w=1}^{t-1} (-k)^(t-w) sum_{j=1}^w (-1)^j B_j [w j]`
pub fn a_coeff(k: u32, m: u32, convention: BernoulliConvention) -> BigRat {
    let inners: Vec<BigRat> = (0..m as usize).map(|w| inner(w, convention)).collect();
    a_coeff_with(k, m, &inners)
}

fn a_coeff_with(k: u32, m: u32, inners: &[BigRat]) -> BigRat {
    let neg_k = BigInt::from(-(k as i64));
    let mut total = BigRat::zero();
    for t in 2..=m as usize {
        let mut s = BigRat::zero();
        for (w, g) in inners.iter().enumerate().take(t).skip(1) {
            s += g * int_rat(num_traits::pow(neg_k.clone(), t - w));
        }
        total += s * int_rat(stirling2(m as usize, t));
    }
    total
}

/// `c_k = A_(k,m+1) C(m,k) (-1)^k / (k! m!)` for `k = 1..=m`.
fn rhs_coefficients(m: u32, convention: BernoulliConvention) -> Vec<BigRat> {
    let inners: Vec<BigRat> = (0..=m as usize).map(|w| inner(w, convention)).collect();
    let m_fact = factorial(m as usize);
    (1..=m)
        .map(|k| {
            let c = a_coeff_with(k, m + 1, &inners) * int_rat(binom_int(m as u64, k as i64))
                / int_rat(factorial(k as usize) * &m_fact);
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}

/// Rough `log10 |v|`.
fn log10_abs(v: &BigRat) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.numer().bits() as f64 - v.denom().bits() as f64;
    bits * std::f64::consts::LOG10_2
}

/// `ln u + sum_{k=1}^m A_(k,m+1) C(m,k) (-1)^k / (k! m!) int x^(k-1) e^-x ln((x+u)/u) dx`.
///
/// The coefficients are exact; the integrals are evaluated with enough extra
/// digits to absorb the cancellation between terms.
pub fn conjecture_rhs(u: &BigRat, m: u32, convention: BernoulliConvention, ctx: &PrecisionContext) -> Result<BigFloat> {
    if !u.is_positive() {
        return Err(Error::Domain(format!("u must be > 0, got {u}")));
    }
    if m == 0 {
        return Err(Error::Domain("m must be >= 1".into()));
    }
    let coeffs = rhs_coefficients(m, convention);
    // integral k is at most (k-1)! times a modest factor
    let peak = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| log10_abs(c) + log10_abs(&int_rat(factorial(i))) + 1.0)
        .fold(0.0f64, f64::max);
    let work = ctx.raised(peak.ceil().max(0.0) as u32 + 5);
    let bits = work.working_bits();
    let mut sum = work.zero();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        sum = sum + BigFloat::from_rat(c, bits) * conjecture_integral(i as u32 + 1, u, &work)?;
    }
    let ln_u = work.rat(u).ln();
    Ok((ln_u + sum).with_prec(ctx.working_bits()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureRow {
    pub u: BigRat,
    pub m: u32,
    pub convention: BernoulliConvention,
    pub rhs: BigFloat,
    pub psi: BigFloat,
    /// `rhs - psi(u)`
    pub residual: BigFloat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    /// Ordered by `u`, then `m`, then convention.
    pub rows: Vec<ConjectureRow>,
    /// Convention with the smaller `|residual|` at the calibration point.
    pub calibrated: BernoulliConvention,
    pub calibration_point: (BigRat, u32),
}

/// Evaluates the right-hand side on the `us x ms` grid under both conventions.
/// The calibration point is `(1, 20)` when present in the grid, otherwise the
/// largest `m` at the first `u`. Nothing about convergence is asserted.
pub fn calibrate(us: &[BigRat], ms: &[u32], ctx: &PrecisionContext) -> Result<Calibration> {
    if us.is_empty() || ms.is_empty() {
        return Err(Error::Domain("calibration grid is empty".into()));
    }
    let mut us = us.to_vec();
    us.sort();
    us.dedup();
    let mut ms = ms.to_vec();
    ms.sort_unstable();
    ms.dedup();
    let mut grid = Vec::new();
    for u in &us {
        for &m in &ms {
            for conv in BernoulliConvention::ALL {
                grid.push((u.clone(), m, conv));
            }
        }
    }
    let psis: Vec<BigFloat> = us.iter().map(|u| digamma(&ctx.rat(u), ctx)).collect::<Result<_>>()?;
    let rows: Vec<ConjectureRow> = grid
        .into_par_iter()
        .map(|(u, m, convention)| {
            let rhs = conjecture_rhs(&u, m, convention, ctx)?;
            let psi = psis[us.binary_search(&u).expect("u in grid")].clone();
            let residual = &rhs - &psi;
            Ok(ConjectureRow {
                u,
                m,
                convention,
                rhs,
                psi,
                residual,
            })
        })
        .collect::<Result<_>>()?;
    let one = int_rat(1);
    let point = if us.contains(&one) && ms.contains(&20) {
        (one, 20)
    } else {
        (us[0].clone(), *ms.last().expect("nonempty"))
    };
    let at = |conv: BernoulliConvention| {
        rows.iter()
            .find(|r| r.u == point.0 && r.m == point.1 && r.convention == conv)
            .map(|r| r.residual.abs())
            .expect("calibration point in grid")
    };
    let calibrated = if at(BernoulliConvention::PlusHalf) < at(BernoulliConvention::MinusHalf) {
        BernoulliConvention::PlusHalf
    } else {
        BernoulliConvention::MinusHalf
    };
    Ok(Calibration {
        rows,
        calibrated,
        calibration_point: point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{bernoulli_with, rat};

    /// Literal triple sum with every factor recomputed.
    fn a_brute(k: u32, m: u32, conv: BernoulliConvention) -> BigRat {
        let mut total = BigRat::zero();
        for t in 2..=m as usize {
            for w in 1..t {
                for j in 1..=w {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    total += int_rat(stirling2(m as usize, t))
                        * int_rat(num_traits::pow(BigInt::from(-(k as i64)), t - w))
                        * int_rat(sign)
                        * bernoulli_with(j, conv)
                        * int_rat(stirling1_unsigned(w, j));
                }
            }
        }
        total
    }

    #[test]
    fn a_coeff_examples() {
        for conv in BernoulliConvention::ALL {
            assert!(a_coeff(3, 1, conv).is_zero());
        }
        assert_eq!(a_coeff(1, 2, BernoulliConvention::MinusHalf), rat(-1, 2));
        assert_eq!(a_coeff(1, 2, BernoulliConvention::PlusHalf), rat(1, 2));
        for conv in BernoulliConvention::ALL {
            for k in 1..=6 {
                for m in 1..=9 {
                    assert_eq!(a_coeff(k, m, conv), a_brute(k, m, conv), "k = {k}, m = {m}");
                }
            }
        }
        // A_{2,3} = {3 2}(-2) B1 [1 1] * (-1) + {3 3}((-2)^2 (-B1) + (-2)(-B1 + B2))
        let b1 = bernoulli_with(1, BernoulliConvention::MinusHalf);
        let b2 = bernoulli_with(2, BernoulliConvention::MinusHalf);
        let expect = int_rat(3) * int_rat(-2) * (-&b1) + int_rat(4) * (-&b1) + int_rat(-2) * (-&b1 + &b2);
        assert_eq!(a_coeff(2, 3, BernoulliConvention::MinusHalf), expect);
    }

    #[test]
    fn rhs_at_u_one_has_no_log_term() {
        let ctx = PrecisionContext::new(20).unwrap();
        let v = conjecture_rhs(&int_rat(1), 1, BernoulliConvention::MinusHalf, &ctx).unwrap();
        // m = 1: A_{1,2} C(1,1) (-1) / 1 * delta
        let expect = ctx.rat(&rat(1, 2)) * crate::reference::delta_value(&ctx);
        assert!((v - expect).abs() < ctx.output_tolerance());
        assert!(conjecture_rhs(&int_rat(0), 3, BernoulliConvention::MinusHalf, &ctx).is_err());
        assert!(conjecture_rhs(&int_rat(1), 0, BernoulliConvention::MinusHalf, &ctx).is_err());
    }

    #[test]
    fn precision_escalation() {
        let c20 = PrecisionContext::new(20).unwrap();
        let c40 = PrecisionContext::new(40).unwrap();
        for conv in BernoulliConvention::ALL {
            let a = conjecture_rhs(&rat(1, 2), 12, conv, &c20).unwrap();
            let b = conjecture_rhs(&rat(1, 2), 12, conv, &c40).unwrap();
            assert!((a - b).abs() < c20.output_tolerance());
        }
    }

    #[test]
    fn calibration_small_grid() {
        let ctx = PrecisionContext::new(15).unwrap();
        let cal = calibrate(&[int_rat(2), int_rat(1)], &[5, 3], &ctx).unwrap();
        assert_eq!(cal.rows.len(), 8);
        assert_eq!(cal.rows[0].u, int_rat(1));
        assert_eq!(cal.rows[0].m, 3);
        assert_eq!(cal.calibration_point, (int_rat(1), 5));
        for pair in cal.rows.chunks(2) {
            assert_ne!(pair[0].residual, pair[1].residual);
        }
    }
}
