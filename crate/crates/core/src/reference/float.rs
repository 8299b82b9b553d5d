//! Binary floating point with an explicit, per-value precision.
//!
//! A [`BigFloat`] is `(-1)^neg * mant * 2^exp` where `mant` holds exactly
//! `prec` bits (or is zero). Every operation rounds to nearest, ties to even,
//! at the larger precision of its operands. The exponent range is that of
//! `i64`, so the tiny abscissae produced by double-exponential quadrature
//! never underflow.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmath::BigRat;

/// Largest `decimal_digits` a [`PrecisionContext`] accepts.
pub const MAX_DECIMAL_DIGITS: u32 = 2000;

/// Default number of guard digits carried beyond the requested output digits.
pub const DEFAULT_GUARD_DIGITS: u32 = 15;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Requested output accuracy plus the guard digits used internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    decimal_digits: u32,
    guard_digits: u32,
    working_bits: u32,
}

impl PrecisionContext {
    pub fn new(decimal_digits: u32) -> Result<Self> {
        Self::with_guard(decimal_digits, DEFAULT_GUARD_DIGITS)
    }

    /// `guard_digits` must be at least 5 so that the working precision keeps
    /// 16 bits beyond what the output digits need.
    pub fn with_guard(decimal_digits: u32, guard_digits: u32) -> Result<Self> {
        if decimal_digits == 0 || guard_digits < 5 {
            return Err(Error::InvalidPrecision {
                digits: decimal_digits,
                guard: guard_digits,
            });
        }
        if decimal_digits > MAX_DECIMAL_DIGITS {
            return Err(Error::PrecisionUnreachable {
                requested: decimal_digits,
                cap: MAX_DECIMAL_DIGITS,
            });
        }
        let working_bits = ((decimal_digits + guard_digits) as f64 * LOG2_10).ceil() as u32;
        Ok(Self {
            decimal_digits,
            guard_digits,
            working_bits,
        })
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    pub fn working_bits(&self) -> u32 {
        self.working_bits
    }

    /// Total digits carried internally, `decimal_digits + guard_digits`.
    pub fn internal_digits(&self) -> u32 {
        self.decimal_digits + self.guard_digits
    }

    /// Internal tolerance `10^-(decimal_digits + guard_digits)`.
    pub fn tolerance(&self) -> BigFloat {
        self.pow10_neg(self.internal_digits())
    }

    /// Output tolerance `10^-decimal_digits`.
    pub fn output_tolerance(&self) -> BigFloat {
        self.pow10_neg(self.decimal_digits)
    }

    /// `10^-digits` at working precision.
    pub fn pow10_neg(&self, digits: u32) -> BigFloat {
        let den = BigUint::from(10u32).pow(digits);
        BigFloat::from_ratio(&BigInt::one(), &BigInt::from(den), self.working_bits)
    }

    /// The same output digits with a different guard.
    pub fn raised(&self, extra_digits: u32) -> Self {
        Self::with_guard(self.decimal_digits, self.guard_digits + extra_digits)
            .expect("raising guard digits keeps the context valid")
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::zero(self.working_bits)
    }

    pub fn one(&self) -> BigFloat {
        BigFloat::from_i64(1, self.working_bits)
    }

    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.working_bits)
    }

    pub fn bigint(&self, v: &BigInt) -> BigFloat {
        BigFloat::from_bigint(v, self.working_bits)
    }

    pub fn rat(&self, v: &BigRat) -> BigFloat {
        BigFloat::from_rat(v, self.working_bits)
    }
}

#[derive(Clone, Debug)]
pub struct BigFloat {
    neg: bool,
    mant: BigUint,
    exp: i64,
    prec: u32,
}

fn round_mag(mag: BigUint, exp: i64, prec: u32, sticky: bool) -> (BigUint, i64) {
    let bits = mag.bits() as u32;
    if bits > prec {
        let s = bits - prec;
        let mut q = &mag >> s;
        let rem = &mag - (&q << s);
        let half = BigUint::one() << (s - 1);
        let round_up = match rem.cmp(&half) {
            Ordering::Greater => true,
            Ordering::Equal => sticky || q.is_odd(),
            Ordering::Less => false,
        };
        let mut e = exp + s as i64;
        if round_up {
            q += 1u32;
            if q.bits() as u32 > prec {
                q >>= 1u32;
                e += 1;
            }
        }
        (q, e)
    } else {
        let s = prec - bits;
        (mag << s, exp - s as i64)
    }
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        Self {
            neg: false,
            mant: BigUint::zero(),
            exp: 0,
            prec,
        }
    }

    fn from_parts(neg: bool, mag: BigUint, exp: i64, prec: u32, sticky: bool) -> Self {
        if mag.is_zero() {
            return Self::zero(prec);
        }
        let (mant, exp) = round_mag(mag, exp, prec, sticky);
        Self { neg, mant, exp, prec }
    }

    fn from_signed(v: BigInt, exp: i64, prec: u32) -> Self {
        let (sign, mag) = v.into_parts();
        Self::from_parts(sign == Sign::Minus, mag, exp, prec, false)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_signed(BigInt::from(v), 0, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::from_signed(v.clone(), 0, prec)
    }

    /// `v * 2^exp`.
    pub fn from_bigint_exp(v: &BigInt, exp: i64, prec: u32) -> Self {
        Self::from_signed(v.clone(), exp, prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "cannot convert non-finite f64");
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let neg = bits >> 63 == 1;
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Self::from_parts(neg, BigUint::from(m), e, prec, false)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero(prec);
        }
        let neg = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
        let n = num.magnitude();
        let d = den.magnitude();
        let shift = (prec as i64 + 2 + d.bits() as i64 - n.bits() as i64).max(0) as u64;
        let (q, r) = (n << shift).div_rem(d);
        Self::from_parts(neg, q, -(shift as i64), prec, !r.is_zero())
    }

    pub fn from_rat(v: &BigRat, prec: u32) -> Self {
        Self::from_ratio(v.numer(), v.denom(), prec)
    }

    /// Parses a plain or scientific decimal literal exactly, then rounds.
    pub fn parse_decimal(s: &str, prec: u32) -> Option<Self> {
        let r = crate::exactmath::parse_decimal_rat(s)?;
        Some(Self::from_rat(&r, prec))
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// The same value rounded to a new precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::from_parts(self.neg, self.mant.clone(), self.exp, prec, false)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.neg && !self.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.neg && !self.is_zero()
    }

    pub fn abs(&self) -> Self {
        Self {
            neg: false,
            ..self.clone()
        }
    }

    /// Exponent of the leading bit: `|self|` lies in `[2^e, 2^(e+1))`.
    /// Zero maps to `i64::MIN`.
    pub fn log2_floor(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64 - 1
        }
    }

    /// Multiplies by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            exp: self.exp + k,
            ..self.clone()
        }
    }

    /// Exact rational value.
    pub fn to_rat(&self) -> BigRat {
        let m = BigInt::from_biguint(if self.neg { Sign::Minus } else { Sign::Plus }, self.mant.clone());
        if self.exp >= 0 {
            BigRat::from_integer(m << self.exp as u64)
        } else {
            BigRat::new(m, BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(64);
        let top = (&self.mant >> shift).to_u64().unwrap_or(u64::MAX) as f64;
        let e = self.exp + shift as i64;
        let v = if e > 2000 {
            f64::INFINITY
        } else if e < -2200 {
            0.0
        } else {
            top * 2f64.powi(e as i32)
        };
        if self.neg {
            -v
        } else {
            v
        }
    }

    /// Nearest integer, ties away from zero.
    pub fn round_to_bigint(&self) -> BigInt {
        let half = Self::from_ratio(&BigInt::one(), &BigInt::from(2), self.prec + 2);
        let shifted = if self.neg { self - &half } else { self + &half };
        shifted.trunc_to_bigint()
    }

    pub fn trunc_to_bigint(&self) -> BigInt {
        let mag = if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        };
        BigInt::from_biguint(if self.neg { Sign::Minus } else { Sign::Plus }, mag)
    }

    fn signed_mant(&self) -> BigInt {
        BigInt::from_biguint(if self.neg { Sign::Minus } else { Sign::Plus }, self.mant.clone())
    }

    fn add_impl(&self, other: &Self, negate_other: bool) -> Self {
        let prec = self.prec.max(other.prec);
        let other_neg = other.neg ^ negate_other;
        if other.is_zero() {
            return self.with_prec(prec);
        }
        if self.is_zero() {
            let mut r = other.with_prec(prec);
            r.neg = other_neg;
            return r;
        }
        let (hi, hi_neg, lo, lo_neg) = if self.log2_floor() >= other.log2_floor() {
            (self, self.neg, other, other_neg)
        } else {
            (other, other_neg, self, self.neg)
        };
        // Beyond this gap the smaller operand only nudges the rounding.
        if hi.log2_floor() - lo.log2_floor() > prec as i64 + 4 {
            let mut mag = &hi.mant << 3u32;
            if hi_neg == lo_neg {
                mag += 1u32;
            } else {
                mag -= 1u32;
            }
            return Self::from_parts(hi_neg, mag, hi.exp - 3, prec, false);
        }
        let e = hi.exp.min(lo.exp);
        let a = BigInt::from_biguint(
            if hi_neg { Sign::Minus } else { Sign::Plus },
            &hi.mant << (hi.exp - e) as u64,
        );
        let b = BigInt::from_biguint(
            if lo_neg { Sign::Minus } else { Sign::Plus },
            &lo.mant << (lo.exp - e) as u64,
        );
        Self::from_signed(a + b, e, prec)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        Self::from_parts(
            self.neg != other.neg,
            &self.mant * &other.mant,
            self.exp + other.exp,
            prec,
            false,
        )
    }

    fn div_impl(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return Self::zero(prec);
        }
        let shift = (prec as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0) as u64;
        let (q, r) = (&self.mant << shift).div_rem(&other.mant);
        Self::from_parts(
            self.neg != other.neg,
            q,
            self.exp - other.exp - shift as i64,
            prec,
            !r.is_zero(),
        )
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative BigFloat");
        if self.is_zero() {
            return self.clone();
        }
        let mut shift = 2 * self.prec as i64 + 4 - self.mant.bits() as i64;
        if (self.exp - shift).is_odd() {
            shift += 1;
        }
        let m = if shift >= 0 {
            &self.mant << shift as u64
        } else {
            &self.mant >> (-shift) as u64
        };
        let s = m.sqrt();
        let exact = &s * &s == m;
        Self::from_parts(false, s, (self.exp - shift) / 2, self.prec, !exact)
    }

    pub fn recip(&self) -> Self {
        Self::from_i64(1, self.prec) / self
    }

    pub fn powi(&self, n: i64) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let guard = self.prec + 2 * (64 - (n as u64).leading_zeros()) + 8;
        let mut base = self.with_prec(guard);
        let mut acc = Self::from_i64(1, guard);
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc.with_prec(self.prec)
    }

    /// `e^self`.
    pub fn exp(&self) -> Self {
        let p = self.prec;
        if self.is_zero() {
            return Self::from_i64(1, p);
        }
        let approx = self.to_f64();
        assert!(approx.abs() < 4.0e18, "exp argument out of range");
        let k = (approx / std::f64::consts::LN_2).round() as i64;
        let kbits = 64 - k.unsigned_abs().leading_zeros();
        let w = p + 48 + kbits;
        let r = if k == 0 {
            self.with_prec(w)
        } else {
            &self.with_prec(w) - &(&ln2(w + kbits) * &Self::from_i64(k, w))
        };
        // r is in [-ln2/2, ln2/2]; halve it `s` more times and square back.
        let s = ((w as f64).sqrt() / 2.0).ceil() as u32;
        let frac = w + s + 16;
        let rr = r.mul_pow2(-(s as i64));
        let rfix = fixed_point(&rr, frac);
        let one = BigInt::one() << frac;
        let mut sum = one.clone();
        let mut term = one;
        let mut n = 1u32;
        loop {
            term = (&term * &rfix) >> frac;
            term /= n;
            if term.is_zero() {
                break;
            }
            sum += &term;
            n += 1;
        }
        for _ in 0..s {
            sum = (&sum * &sum) >> frac;
        }
        Self::from_bigint_exp(&sum, k - frac as i64, p)
    }

    /// Natural logarithm; panics unless `self > 0`.
    pub fn ln(&self) -> Self {
        assert!(self.is_positive(), "ln of nonpositive BigFloat");
        let p = self.prec;
        let w = p + 32;
        // self = m * 2^e with m in [0.75, 1.5)
        let mut e = self.log2_floor();
        let mut m = self.with_prec(w).mul_pow2(-e);
        if m > Self::from_f64(1.5, w) {
            m = m.mul_pow2(-1);
            e += 1;
        }
        let one = Self::from_i64(1, w);
        let z = &(&m - &one) / &(&m + &one);
        let lm = atanh_series(&z).mul_pow2(1);
        if e == 0 {
            return lm.with_prec(p);
        }
        let ebits = 64 - e.unsigned_abs().leading_zeros();
        let l2 = ln2(w + ebits);
        (&(&l2 * &Self::from_i64(e, w + ebits)) + &lm).with_prec(p)
    }

    /// `ln(1 + self)`, accurate relative to the result when `self` is tiny.
    pub fn ln_1p(&self) -> Self {
        let p = self.prec;
        let w = p + 16;
        let y = self.with_prec(w);
        if self.abs() < Self::from_f64(0.5, w) {
            let z = &y / &(&Self::from_i64(2, w) + &y);
            atanh_series(&z).mul_pow2(1).with_prec(p)
        } else {
            (&Self::from_i64(1, w) + &y).ln().with_prec(p)
        }
    }

    /// `self^a = exp(a ln self)` for positive `self`.
    pub fn powf(&self, a: &Self) -> Self {
        let w = self.prec.max(a.prec) + 32;
        (&self.with_prec(w).ln() * &a.with_prec(w))
            .exp()
            .with_prec(self.prec.max(a.prec))
    }

    pub fn pi(prec: u32) -> Self {
        cached_constant(&PI_CACHE, prec, compute_pi)
    }

    pub fn ln2(prec: u32) -> Self {
        ln2(prec)
    }

    /// Decimal rendering with exactly `digits` significant digits.
    ///
    /// Plain notation when the decimal exponent lies in `[-6, digits)`,
    /// scientific (`d.ddde-N`) otherwise.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        assert!(digits > 0);
        if self.is_zero() {
            return "0".to_string();
        }
        let (digit_str, n) = self.decimal_digits(digits);
        let sign = if self.neg { "-" } else { "" };
        let d = digits as i64;
        if (-6..d).contains(&n) {
            if n >= 0 {
                let (int_part, frac_part) = digit_str.split_at((n + 1) as usize);
                if frac_part.is_empty() {
                    format!("{sign}{int_part}")
                } else {
                    format!("{sign}{int_part}.{frac_part}")
                }
            } else {
                let zeros = "0".repeat((-n - 1) as usize);
                format!("{sign}0.{zeros}{digit_str}")
            }
        } else {
            let (head, tail) = digit_str.split_at(1);
            if tail.is_empty() {
                format!("{sign}{head}e{n}")
            } else {
                format!("{sign}{head}.{tail}e{n}")
            }
        }
    }

    /// The `digits` leading decimal digits of `|self|` (rounded half-even) and
    /// the decimal exponent of the first one.
    fn decimal_digits(&self, digits: u32) -> (String, i64) {
        let value = self.to_rat().abs();
        let mut n = ((self.log2_floor() as f64) * std::f64::consts::LOG10_2).floor() as i64;
        let lower = BigInt::from(10u32).pow(digits - 1);
        let upper = BigInt::from(10u32).pow(digits);
        loop {
            let k = digits as i64 - 1 - n;
            let scaled = if k >= 0 {
                &value * BigRat::from_integer(BigInt::from(10u32).pow(k as u32))
            } else {
                &value / BigRat::from_integer(BigInt::from(10u32).pow((-k) as u32))
            };
            let q = round_half_even(&scaled);
            if q >= upper {
                n += 1;
            } else if q < lower {
                n -= 1;
            } else {
                return (q.to_string(), n);
            }
        }
    }
}

fn round_half_even(v: &BigRat) -> BigInt {
    let (q, r) = v.numer().div_mod_floor(v.denom());
    let twice: BigInt = &r * 2;
    match twice.cmp(v.denom()) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    }
}

/// `round(v * 2^frac)` as a signed integer (truncated; callers carry guard bits).
fn fixed_point(v: &BigFloat, frac: u32) -> BigInt {
    let shift = v.exp + frac as i64;
    let m = v.signed_mant();
    if shift >= 0 {
        m << shift as u64
    } else {
        m >> (-shift) as u64
    }
}

/// `atanh(z) = z + z^3/3 + z^5/5 + ...` for `|z| <= 1/5`, computed in floating
/// arithmetic so that small `z` keeps full relative accuracy.
fn atanh_series(z: &BigFloat) -> BigFloat {
    if z.is_zero() {
        return z.clone();
    }
    let w = z.prec + 8;
    let z = z.with_prec(w);
    let z2 = &z * &z;
    let mut power = z.clone();
    let mut sum = z.clone();
    let stop = z.log2_floor() - w as i64 - 2;
    let mut k = 1i64;
    loop {
        power = &power * &z2;
        let term = &power / &BigFloat::from_i64(2 * k + 1, w);
        if term.is_zero() || term.log2_floor() < stop {
            break;
        }
        sum = &sum + &term;
        k += 1;
    }
    sum.with_prec(z.prec - 8)
}

type ConstCache = OnceLock<Mutex<HashMap<u32, BigFloat>>>;

static PI_CACHE: ConstCache = OnceLock::new();
static LN2_CACHE: ConstCache = OnceLock::new();

/// Constants are evaluated at a canonical precision (a multiple of 256 bits)
/// and rounded down, so the value returned for a given `prec` never depends on
/// which precisions were requested earlier.
fn cached_constant(cache: &ConstCache, prec: u32, compute: fn(u32) -> BigFloat) -> BigFloat {
    let canonical = (prec + 64).div_ceil(256) * 256;
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    let hit = map.lock().expect("constant cache poisoned").get(&canonical).cloned();
    let value = match hit {
        Some(v) => v,
        None => {
            let v = compute(canonical);
            map.lock()
                .expect("constant cache poisoned")
                .insert(canonical, v.clone());
            v
        }
    };
    value.with_prec(prec)
}

fn ln2(prec: u32) -> BigFloat {
    cached_constant(&LN2_CACHE, prec, |p| {
        let third = BigFloat::from_ratio(&BigInt::one(), &BigInt::from(3), p + 16);
        atanh_series(&third).mul_pow2(1).with_prec(p)
    })
}

fn arctan_inv_fixed(x: u32, frac: u32) -> BigInt {
    // atan(1/x) scaled by 2^frac
    let x2 = BigInt::from(x) * x;
    let mut power = (BigInt::one() << frac) / x;
    let mut sum = power.clone();
    let mut k = 1u32;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / (2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

fn compute_pi(prec: u32) -> BigFloat {
    let frac = prec + 32;
    let v = arctan_inv_fixed(5, frac) * 16 - arctan_inv_fixed(239, frac) * 4;
    BigFloat::from_bigint_exp(&v, -(frac as i64), prec)
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl BigFloat {
    fn cmp_value(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return if other.neg { Ordering::Greater } else { Ordering::Less },
            (false, true) => return if self.neg { Ordering::Less } else { Ordering::Greater },
            _ => {}
        }
        if self.neg != other.neg {
            return if self.neg { Ordering::Less } else { Ordering::Greater };
        }
        let mag = match self.log2_floor().cmp(&other.log2_floor()) {
            Ordering::Equal => {
                let e = self.exp.min(other.exp);
                let a = &self.mant << (self.exp - e) as u64;
                let b = &other.mant << (other.exp - e) as u64;
                a.cmp(&b)
            }
            o => o,
        };
        if self.neg {
            mag.reverse()
        } else {
            mag
        }
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .map(|d| d as u32)
            .unwrap_or(((self.prec as f64) / LOG2_10).floor().max(1.0) as u32);
        f.write_str(&self.to_decimal_string(digits))
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(mut self) -> BigFloat {
        if !self.is_zero() {
            self.neg = !self.neg;
        }
        self
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -self.clone()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                let f: fn(&BigFloat, &BigFloat) -> BigFloat = $body;
                f(self, rhs)
            }
        }
        impl $tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                (&self).$method(rhs)
            }
        }
        impl $tr<BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_impl(b, false));
forward_binop!(Sub, sub, |a, b| a.add_impl(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));
forward_binop!(Div, div, |a, b| a.div_impl(b));

impl std::iter::Sum for BigFloat {
    fn sum<I: Iterator<Item = BigFloat>>(mut iter: I) -> BigFloat {
        let first = iter.next().unwrap_or_else(|| BigFloat::zero(64));
        iter.fold(first, |acc, x| acc + x)
    }
}
