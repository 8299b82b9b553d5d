//! Exact integer and rational arithmetic: binomials, factorials, Stirling and
//! Bernoulli numbers, alternating factorial sums, and elements of `Q[delta]`.

mod combinatorics;
mod delta_linear;

pub use combinatorics::{
    alt_factorial_sum, bernoulli, bernoulli_with, binom_gen, binom_int, factorial, stirling1_unsigned, stirling2,
    warm_up, BernoulliConvention,
};
pub use delta_linear::{delta_linear_eval, DeltaLinear};

use num_bigint::BigInt;
use num_traits::Zero;

/// Exact rational, always in lowest terms with a positive denominator.
pub type BigRat = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> BigRat {
    BigRat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int_rat(v: impl Into<BigInt>) -> BigRat {
    BigRat::from_integer(v.into())
}

pub fn sign_pow(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Parses `"p"`, `"p/q"`, or a decimal literal such as `"-0.75"` or
/// `"1.5e-3"` into an exact rational. No binary floating point is involved.
pub fn parse_rat(s: &str) -> Option<BigRat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRat::new(n, d));
    }
    parse_decimal_rat(s)
}

pub fn parse_decimal_rat(s: &str) -> Option<BigRat> {
    let s = s.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        BigRat::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRat::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Some(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rat("1/2"), Some(rat(1, 2)));
        assert_eq!(parse_rat("-6/8"), Some(rat(-3, 4)));
        assert_eq!(parse_rat("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rat("-1.5e-3"), Some(rat(-3, 2000)));
        assert_eq!(parse_rat("1e6"), Some(int_rat(1_000_000)));
        assert_eq!(parse_rat("3"), Some(int_rat(3)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("abc"), None);
        assert_eq!(parse_rat("."), None);
    }
}
