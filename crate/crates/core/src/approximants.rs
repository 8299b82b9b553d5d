//! Integer sequences `(a_m, b_m)` whose ratios approach `+delta` or `-delta`.
//!
//! Both families are summed exactly; the only rounding is the single
//! division `a_m / b_m` at output precision.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactmath::{alt_factorial_sum, binom_int, factorial, int_rat, BigRat};
use crate::reference::{delta_value, BigFloat, PrecisionContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Corollary {
    /// `b_m = sum_k C(m,k)^2 C(k,r) (m-k)!`
    One,
    /// `b_m = m! sum_k sum_{j<k} C(m,k) C(k,r) (-1)^(k+j) / (k j!)`
    Two,
}

impl Corollary {
    pub fn number(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Self::One),
            2 => Some(Self::Two),
            _ => None,
        }
    }

    /// Sign of the limit the computed ratios approach: `+delta` for the first
    /// family as its `a_m` is written, `-delta` for the second.
    pub fn target_sign(self) -> i8 {
        match self {
            Self::One => 1,
            Self::Two => -1,
        }
    }

    /// Smallest admissible `r`.
    pub fn min_r(self) -> u32 {
        match self {
            Self::One => 0,
            Self::Two => 1,
        }
    }
}

impl fmt::Display for Corollary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// `(a_m, b_m)` of the first family:
/// `b_m = sum_{k=r}^m C(m,k)^2 C(k,r) (m-k)!` and `a_m` the same sum weighted
/// by `sum_{w<k} (-1)^w w!`.
pub fn cor1_pair(m: u32, r: u32) -> Result<(BigInt, BigInt)> {
    if m < r {
        return Err(Error::Domain(format!("need m >= r, got m = {m}, r = {r}")));
    }
    let mut a = BigInt::zero();
    let mut b = BigInt::zero();
    for k in r..=m {
        let c = binom_int(m as u64, k as i64);
        let term = &c * &c * binom_int(k as u64, r as i64) * factorial((m - k) as usize);
        a += &term * alt_factorial_sum(k as usize);
        b += term;
    }
    Ok((a, b))
}

/// `(a_m, b_m)` of the second family, `r >= 1`.
///
/// The innermost sum of `a_m` is `sum_{i<j} i! (-1)^(i+1) = -alt_factorial_sum(j)`,
/// so both sums reduce to prefix sums over `j`. Everything is accumulated in
/// exact rationals and must come out integral.
pub fn cor2_pair(m: u32, r: u32) -> Result<(BigInt, BigInt)> {
    if r == 0 {
        return Err(Error::Domain("the second family needs r >= 1".into()));
    }
    if m < r {
        return Err(Error::Domain(format!("need m >= r, got m = {m}, r = {r}")));
    }
    // prefix_b[k] = sum_{j<k} (-1)^j / j!, prefix_a[k] = sum_{j<k} (-1)^j (-alt(j)) / j!
    let mut prefix_a = BigRat::zero();
    let mut prefix_b = BigRat::zero();
    let mut j_fact = BigInt::one();
    let mut a = BigRat::zero();
    let mut b = BigRat::zero();
    for k in 1..=m {
        let j = k - 1;
        if j > 0 {
            j_fact *= j;
        }
        let inv = BigRat::new(BigInt::one(), j_fact.clone());
        let alt = alt_factorial_sum(j as usize);
        if j % 2 == 0 {
            prefix_b += &inv;
            prefix_a -= &inv * int_rat(alt);
        } else {
            prefix_b -= &inv;
            prefix_a += &inv * int_rat(alt);
        }
        if k < r {
            continue;
        }
        let mut coeff = BigRat::new(
            binom_int(m as u64, k as i64) * binom_int(k as u64, r as i64),
            BigInt::from(k),
        );
        if k % 2 == 1 {
            coeff = -coeff;
        }
        a += &coeff * &prefix_a;
        b += &coeff * &prefix_b;
    }
    let m_fact = int_rat(factorial(m as usize));
    Ok((integral(a * &m_fact, "a", m, r)?, integral(b * &m_fact, "b", m, r)?))
}

fn integral(v: BigRat, name: &str, m: u32, r: u32) -> Result<BigInt> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(Error::IntegralityViolation(format!("{name}_{m} at r = {r} is {v}")))
    }
}

pub fn pair(corollary: Corollary, m: u32, r: u32) -> Result<(BigInt, BigInt)> {
    match corollary {
        Corollary::One => cor1_pair(m, r),
        Corollary::Two => cor2_pair(m, r),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproximantRow {
    pub m: u32,
    pub r: u32,
    pub corollary: Corollary,
    pub a: BigInt,
    pub b: BigInt,
    /// `a / b`; `None` when `b = 0`.
    pub ratio: Option<BigFloat>,
    /// `|ratio - target_sign * delta|`; `None` when `b = 0`.
    pub abs_error: Option<BigFloat>,
}

/// Rows for `m = max(r, 1) ..= m_max`, in order of `m`.
pub fn approx_table(corollary: Corollary, r: u32, m_max: u32, ctx: &PrecisionContext) -> Result<Vec<ApproximantRow>> {
    if r < corollary.min_r() {
        return Err(Error::Domain(format!(
            "family {corollary} needs r >= {}, got {r}",
            corollary.min_r()
        )));
    }
    if m_max < r {
        return Err(Error::Domain(format!("need m_max >= r, got m_max = {m_max}, r = {r}")));
    }
    let delta = delta_value(ctx);
    let target = if corollary.target_sign() < 0 { -&delta } else { delta };
    let bits = ctx.working_bits();
    (r.max(1)..=m_max)
        .into_par_iter()
        .map(|m| {
            let (a, b) = pair(corollary, m, r)?;
            let (ratio, abs_error) = if b.is_zero() {
                (None, None)
            } else {
                let ratio = BigFloat::from_ratio(&a, &b, bits);
                let err = (&ratio - &target).abs();
                (Some(ratio), Some(err))
            };
            Ok(ApproximantRow {
                m,
                r,
                corollary,
                a,
                b,
                ratio,
                abs_error,
            })
        })
        .collect()
}

/// Which of `+delta` / `-delta` the last defined ratio is closer to.
pub fn empirical_target_sign(rows: &[ApproximantRow], ctx: &PrecisionContext) -> Option<i8> {
    let ratio = rows.iter().rev().find_map(|row| row.ratio.as_ref())?;
    let delta = delta_value(ctx);
    let plus = (ratio - &delta).abs();
    let minus = (ratio + &delta).abs();
    Some(if plus <= minus { 1 } else { -1 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayReport {
    pub m_list: Vec<u32>,
    pub error_list: Vec<Option<BigFloat>>,
    /// `(m, m', e_m / e_m')` for each requested pair present in the rows.
    pub decade_gains: Vec<(u32, u32, BigFloat)>,
}

/// Per-row errors plus `e_m / e_m'` for the requested pairs. No monotonicity
/// is assumed; pairs with a missing or zero error are left out.
pub fn error_decay_report(rows: &[ApproximantRow], pairs: &[(u32, u32)]) -> DecayReport {
    let m_list: Vec<u32> = rows.iter().map(|row| row.m).collect();
    let error_list: Vec<Option<BigFloat>> = rows.iter().map(|row| row.abs_error.clone()).collect();
    let lookup = |m: u32| rows.iter().find(|row| row.m == m).and_then(|row| row.abs_error.clone());
    let decade_gains = if rows.len() < 2 {
        Vec::new()
    } else {
        pairs
            .iter()
            .filter_map(|&(m1, m2)| {
                let e1 = lookup(m1)?;
                let e2 = lookup(m2)?;
                if e2.is_zero() {
                    return None;
                }
                Some((m1, m2, e1 / e2))
            })
            .collect()
    };
    DecayReport {
        m_list,
        error_list,
        decade_gains,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::sign_pow;
    use proptest::prelude::*;

    fn ints(a: i64, b: i64) -> (BigInt, BigInt) {
        (BigInt::from(a), BigInt::from(b))
    }

    /// The defining triple sum, term by term.
    fn cor2_brute(m: u32, r: u32) -> (BigRat, BigRat) {
        let mut a = BigRat::zero();
        let mut b = BigRat::zero();
        let m_fact = int_rat(factorial(m as usize));
        for k in r..=m {
            let c = int_rat(binom_int(m as u64, k as i64) * binom_int(k as u64, r as i64));
            for j in 0..k {
                let base = &c / (int_rat(k as i64) * int_rat(factorial(j as usize)));
                b += &base * int_rat(sign_pow((k + j) as i64));
                for i in 0..j {
                    a += &base * int_rat(factorial(i as usize)) * int_rat(sign_pow((k + j + i + 1) as i64));
                }
            }
        }
        (a * &m_fact, b * &m_fact)
    }

    #[test]
    fn cor1_examples() {
        assert_eq!(cor1_pair(1, 0).unwrap(), ints(1, 2));
        assert_eq!(cor1_pair(2, 0).unwrap(), ints(4, 7));
        assert_eq!(cor1_pair(3, 0).unwrap(), ints(20, 34));
        assert!(matches!(cor1_pair(1, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn cor2_examples() {
        assert_eq!(cor2_pair(1, 1).unwrap(), ints(0, -1));
        assert_eq!(cor2_pair(2, 1).unwrap(), ints(2, -4));
        assert!(matches!(cor2_pair(3, 0), Err(Error::Domain(_))));
        assert!(matches!(cor2_pair(1, 2), Err(Error::Domain(_))));
        // b vanishes at r = 2, m = 2
        assert!(cor2_pair(2, 2).unwrap().1.is_zero());
    }

    #[test]
    fn cor2_matches_triple_sum() {
        for r in 1..=4 {
            for m in r..=18 {
                let (a, b) = cor2_pair(m, r).unwrap();
                let (ba, bb) = cor2_brute(m, r);
                assert_eq!(int_rat(a), ba, "a, m = {m}, r = {r}");
                assert_eq!(int_rat(b), bb, "b, m = {m}, r = {r}");
            }
        }
    }

    #[test]
    fn cor2_is_integral() {
        for r in 1..=4 {
            for m in r..=60 {
                cor2_pair(m, r).unwrap();
            }
        }
    }

    #[test]
    fn cor1_alternative_grouping() {
        for r in 0..=3u32 {
            for m in r..=40 {
                let (_, b) = cor1_pair(m, r).unwrap();
                let mut alt = BigRat::zero();
                for k in r..=m {
                    alt += BigRat::new(
                        binom_int(m as u64, k as i64) * binom_int(k as u64, r as i64),
                        factorial(k as usize),
                    );
                }
                assert_eq!(int_rat(b), alt * int_rat(factorial(m as usize)), "m = {m}, r = {r}");
            }
        }
    }

    #[test]
    fn table_examples() {
        let ctx = PrecisionContext::new(10).unwrap();
        let rows = approx_table(Corollary::One, 0, 3, &ctx).unwrap();
        assert_eq!(rows.iter().map(|r| r.m).collect::<Vec<_>>(), vec![1, 2, 3]);
        let s = |v: &Option<BigFloat>| v.as_ref().unwrap().to_decimal_string(3);
        assert_eq!(s(&rows[0].ratio), "0.500");
        assert_eq!(s(&rows[1].ratio), "0.571");
        assert_eq!(s(&rows[1].abs_error), "0.0249");
        assert_eq!(s(&rows[2].abs_error), "0.00811");
        assert_eq!(s(&rows[0].abs_error), "0.0963");

        let rows = approx_table(Corollary::Two, 1, 2, &ctx).unwrap();
        assert_eq!(s(&rows[1].ratio), "-0.500");
        assert_eq!(s(&rows[1].abs_error), "0.0963");

        let rows = approx_table(Corollary::Two, 2, 3, &ctx).unwrap();
        assert_eq!(rows[0].m, 2);
        assert!(rows[0].ratio.is_none() && rows[0].abs_error.is_none());

        assert!(approx_table(Corollary::Two, 0, 3, &ctx).is_err());
        assert!(approx_table(Corollary::One, 4, 3, &ctx).is_err());
    }

    #[test]
    fn targets_and_decay() {
        let ctx = PrecisionContext::new(30).unwrap();
        for (c, r) in [
            (Corollary::One, 0),
            (Corollary::One, 1),
            (Corollary::Two, 1),
            (Corollary::Two, 2),
        ] {
            let rows = approx_table(c, r, 40, &ctx).unwrap();
            assert_eq!(empirical_target_sign(&rows, &ctx), Some(c.target_sign()));
            let report = error_decay_report(&rows, &[(10, 40)]);
            assert_eq!(report.decade_gains.len(), 1);
            assert!(report.decade_gains[0].2 > ctx.int(10), "{c} r = {r}");
        }
    }

    #[test]
    fn decay_report_edge_cases() {
        let ctx = PrecisionContext::new(10).unwrap();
        let rows = approx_table(Corollary::One, 0, 3, &ctx).unwrap();
        let report = error_decay_report(&rows[..1], &[(1, 1)]);
        assert!(report.decade_gains.is_empty());
        assert_eq!(report.m_list, vec![1]);
        let report = error_decay_report(&rows, &[(1, 3), (1, 99)]);
        assert_eq!(report.decade_gains.len(), 1);
        assert_eq!(report.error_list.len(), 3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn cor1_b_positive(m in 0u32..50, r in 0u32..6) {
            prop_assume!(m >= r);
            let (_, b) = cor1_pair(m, r).unwrap();
            prop_assert!(b > BigInt::zero());
        }

        #[test]
        fn table_order_is_by_m(m_max in 1u32..25) {
            let ctx = PrecisionContext::new(10).unwrap();
            let rows = approx_table(Corollary::One, 0, m_max, &ctx).unwrap();
            let ms: Vec<u32> = rows.iter().map(|r| r.m).collect();
            prop_assert_eq!(ms, (1..=m_max).collect::<Vec<_>>());
        }
    }
}
