use num_bigint::BigInt;
use num_traits::Zero;

use super::report::IdentityReport;
use crate::error::{Error, Result};
use crate::exactmath::{binom_gen, binom_int, int_rat, sign_pow, BigRat};

fn inverse(v: BigRat, what: impl FnOnce() -> String) -> Result<BigRat> {
    if v.is_zero() {
        Err(Error::DegenerateDenominator(what()))
    } else {
        Ok(v.recip())
    }
}

fn bin_formula_sides(m: u32, i: u32, r: u32, eps: &BigRat) -> Result<(BigRat, BigRat)> {
    let (mi, ii, ri) = (m as i64, i as i64, r as i64);
    let mut lhs = BigRat::zero();
    for j in i..=m {
        let ji = j as i64;
        let top = eps + int_rat(ji - ri);
        let inv = inverse(binom_gen(&top, j as u64), || format!("C({top}, {j})"))?;
        let term = int_rat(binom_int(m as u64, ji)) * inv * binom_gen(&(eps + int_rat(ji - 1)), (j - i) as u64);
        lhs += term * int_rat(sign_pow(ji));
    }
    let top = eps + int_rat(mi - ri);
    let inv = inverse(binom_gen(&top, m as u64), || format!("C({top}, {m})"))?;
    // C(m-i-r, m-i) as a generalized binomial: zero for 0 <= m-i-r < m-i
    let rhs = binom_gen(&int_rat(mi - ii - ri), (m - i) as u64) * inv * int_rat(sign_pow(ii));
    Ok((lhs, rhs))
}

/// `sum_{j=i}^m C(m,j) C(eps+j-r, j)^-1 C(eps+j-1, j-i) (-1)^j
///  = C(m-i-r, m-i) C(m+eps-r, m)^-1 (-1)^i`, exactly.
pub fn check_bin_formula(m: u32, i: u32, r: u32, eps: &BigRat) -> Result<IdentityReport> {
    const NAME: &str = "bin_formula";
    if i > m {
        return Err(Error::Domain(format!("need i <= m, got i = {i}, m = {m}")));
    }
    let params = vec![
        ("m", int_rat(m as i64)),
        ("i", int_rat(i as i64)),
        ("r", int_rat(r as i64)),
        ("eps", eps.clone()),
    ];
    let (lhs, rhs) = bin_formula_sides(m, i, r, eps)?;
    Ok(IdentityReport::exact(NAME, params, lhs, rhs))
}

/// `sum_{k=j}^m C(m,k) C(k,r) (-1)^k = C(m,j) C(j,r) (j-r)/(m-r) (-1)^j`,
/// exactly. `m = r` divides by zero and is reported as skipped.
pub fn check_binformula2(m: u32, j: u32, r: u32) -> Result<IdentityReport> {
    const NAME: &str = "binformula2";
    if !(r <= j && j <= m) {
        return Err(Error::Domain(format!(
            "need r <= j <= m, got r = {r}, j = {j}, m = {m}"
        )));
    }
    let params = vec![
        ("m", int_rat(m as i64)),
        ("j", int_rat(j as i64)),
        ("r", int_rat(r as i64)),
    ];
    if m == r {
        let e = Error::DegenerateCase(format!("m = r = {m}"));
        return Ok(IdentityReport::skipped(NAME, params, e.to_string()));
    }
    let mut lhs = BigInt::zero();
    for k in j..=m {
        let term = binom_int(m as u64, k as i64) * binom_int(k as u64, r as i64);
        if k % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let rhs = int_rat(binom_int(m as u64, j as i64) * binom_int(j as u64, r as i64))
        * BigRat::new(BigInt::from(j as i64 - r as i64), BigInt::from(m as i64 - r as i64))
        * int_rat(sign_pow(j as i64));
    Ok(IdentityReport::exact(NAME, params, int_rat(lhs), rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use crate::verify::report::{Value, Verdict};

    #[test]
    fn bin_formula_example() {
        let rep = check_bin_formula(2, 0, 0, &rat(-3, 4)).unwrap();
        assert_eq!(rep.verdict, Verdict::ExactPass);
        assert_eq!(rep.lhs, Some(Value::Exact(rat(32, 5))));
        assert_eq!(rep.rhs, Some(Value::Exact(rat(32, 5))));
        assert_eq!(rep.residual, Some(Value::Exact(BigRat::zero())));
    }

    #[test]
    fn bin_formula_single_term() {
        for r in 0..4 {
            for eps in [rat(-3, 4), rat(-5, 9)] {
                let rep = check_bin_formula(6, 6, r, &eps).unwrap();
                assert_eq!(rep.verdict, Verdict::ExactPass);
            }
        }
    }

    #[test]
    fn bin_formula_grid() {
        for eps in [rat(-3, 4), rat(-2, 3), rat(-5, 9)] {
            for m in 0..=12 {
                for i in 0..=m {
                    for r in 0..=3 {
                        let rep = check_bin_formula(m, i, r, &eps).unwrap();
                        assert_eq!(rep.verdict, Verdict::ExactPass, "{rep}");
                    }
                }
            }
        }
    }

    #[test]
    fn bin_formula_degenerate_and_domain() {
        // eps = 0 makes C(eps + 1 - 1, 1) vanish
        assert!(matches!(
            check_bin_formula(2, 0, 1, &int_rat(0)),
            Err(Error::DegenerateDenominator(_))
        ));
        assert!(matches!(check_bin_formula(2, 3, 0, &rat(-3, 4)), Err(Error::Domain(_))));
    }

    #[test]
    fn binformula2_examples() {
        let rep = check_binformula2(3, 2, 1).unwrap();
        assert_eq!(rep.lhs, Some(Value::Exact(int_rat(3))));
        assert_eq!(rep.verdict, Verdict::ExactPass);
        for m in 1..=8 {
            for r in 0..m {
                let rep = check_binformula2(m, r, r).unwrap();
                assert_eq!(rep.rhs, Some(Value::Exact(BigRat::zero())));
                assert_eq!(rep.verdict, Verdict::ExactPass);
            }
        }
        let rep = check_binformula2(4, 4, 4).unwrap();
        assert!(matches!(rep.verdict, Verdict::Skipped { .. }));
        assert!(check_binformula2(3, 1, 2).is_err());
    }

    #[test]
    fn binformula2_grid() {
        for m in 0..=20 {
            for j in 0..=m {
                for r in 0..=j {
                    if m == r {
                        continue;
                    }
                    let rep = check_binformula2(m, j, r).unwrap();
                    assert_eq!(rep.verdict, Verdict::ExactPass, "{rep}");
                }
            }
        }
    }
}
