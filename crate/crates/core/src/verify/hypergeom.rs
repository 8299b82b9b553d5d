use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::report::IdentityReport;
use crate::error::{Error, Result};
use crate::exactmath::{int_rat, BigRat};

/// Parameters of `F(a, b; c; x) = sum_k (a)_k (b)_k / (c)_k x^k / k!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperGeomParams {
    pub a: BigRat,
    /// A nonpositive integer, so the series stops after `1 - b` terms.
    pub b: BigRat,
    pub c: BigRat,
    pub x: BigRat,
}

impl HyperGeomParams {
    pub fn new(a: BigRat, b: BigRat, c: BigRat, x: BigRat) -> Self {
        Self { a, b, c, x }
    }

    fn term_count(&self) -> Result<usize> {
        if !self.b.is_integer() || self.b.is_positive() {
            return Err(Error::Domain(format!("b = {} is not a nonpositive integer", self.b)));
        }
        (-self.b.to_integer())
            .to_usize()
            .map(|n| n + 1)
            .ok_or_else(|| Error::Domain(format!("b = {} is too large", self.b)))
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.b.clone(), self.a.clone(), self.c.clone(), self.x.clone())
    }

    pub(crate) fn params(&self) -> Vec<(&'static str, BigRat)> {
        vec![
            ("a", self.a.clone()),
            ("b", self.b.clone()),
            ("c", self.c.clone()),
            ("x", self.x.clone()),
        ]
    }
}

/// Exact value of a terminating series. Summation stops at the first zero
/// numerator factor, so a series that terminates early through `a` never
/// touches a later vanishing `(c)_k`.
pub fn hypergeom_terminating(p: &HyperGeomParams) -> Result<BigRat> {
    let terms = p.term_count()?;
    let mut term = BigRat::one();
    let mut sum = BigRat::one();
    for k in 1..terms {
        let shift = int_rat(BigInt::from(k - 1));
        let num = (&p.a + &shift) * (&p.b + &shift) * &p.x;
        if num.is_zero() {
            break;
        }
        let den = (&p.c + &shift) * int_rat(BigInt::from(k));
        if den.is_zero() {
            return Err(Error::ZeroDenominator(k));
        }
        term = term * num / den;
        sum += &term;
    }
    Ok(sum)
}

/// Exact comparison of the terminating series with a supplied closed form.
pub fn check_gauss_terminating(p: &HyperGeomParams, closed_form: &BigRat) -> IdentityReport {
    const NAME: &str = "gauss_terminating";
    match hypergeom_terminating(p) {
        Ok(v) => IdentityReport::exact(NAME, p.params(), v, closed_form.clone()),
        Err(e) => IdentityReport::skipped(NAME, p.params(), e.to_string()),
    }
}

/// `F(1, j-m; 1+j-r; 1) = (j-r)/(m-r)` for `1 <= r < j <= m`.
pub fn gauss_family_ratio(m: u32, j: u32, r: u32) -> (HyperGeomParams, BigRat) {
    let (m, j, r) = (m as i64, j as i64, r as i64);
    let p = HyperGeomParams::new(int_rat(1), int_rat(j - m), int_rat(1 + j - r), int_rat(1));
    (p, BigRat::new(BigInt::from(j - r), BigInt::from(m - r)))
}

/// `F(i+eps, i-m; eps+i-r+1; 1)` against its Chu-Vandermonde value
/// `(1-r)_(m-i) / (eps+i-r+1)_(m-i)`.
pub fn gauss_family_binomial(m: u32, i: u32, r: u32, eps: &BigRat) -> (HyperGeomParams, BigRat) {
    let (mi, ii, ri) = (m as i64, i as i64, r as i64);
    let c = eps + int_rat(ii - ri + 1);
    let p = HyperGeomParams::new(eps + int_rat(ii), int_rat(ii - mi), c.clone(), int_rat(1));
    let n = (m - i) as i64;
    let mut num = BigRat::one();
    let mut den = BigRat::one();
    for t in 0..n {
        num *= int_rat(1 - ri + t);
        den *= &c + int_rat(t);
    }
    (p, num / den)
}
