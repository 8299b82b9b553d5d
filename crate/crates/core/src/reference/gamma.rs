use num_traits::Signed;

use super::float::{BigFloat, PrecisionContext};
use crate::error::{Error, Result};
use crate::exactmath::{bernoulli, BigRat};

/// `Gamma(x)` for real `x` that is not a nonpositive integer.
///
/// Arguments below 1/2 are shifted up with `Gamma(x) = Gamma(x+n) / (x)_n`;
/// the shifted value goes through Spouge's approximation with the parameter
/// `a` chosen from its relative error bound `a^-1/2 (2 pi)^-(a+1/2)`.
pub fn gamma_real(x: &BigFloat, ctx: &PrecisionContext) -> Result<BigFloat> {
    if !x.is_positive() {
        let r = x.to_rat();
        if r.is_integer() {
            return Err(Error::Pole(r.to_string()));
        }
    }
    let bits = ctx.working_bits() + 32;
    let x = x.with_prec(bits);
    let half = BigFloat::from_f64(0.5, bits);
    if x < half {
        let shift = (1.0 - x.to_f64()).ceil().max(1.0) as i64;
        let mut denom = BigFloat::from_i64(1, bits);
        for k in 0..shift {
            denom = denom * (&x + &BigFloat::from_i64(k, bits));
        }
        let shifted = spouge(&(&x + &BigFloat::from_i64(shift, bits)), ctx);
        return Ok((shifted / denom).with_prec(ctx.working_bits()));
    }
    Ok(spouge(&x, ctx).with_prec(ctx.working_bits()))
}

/// `Gamma(x)` at a rational argument; poles are detected exactly.
pub fn gamma_rat(x: &BigRat, ctx: &PrecisionContext) -> Result<BigFloat> {
    if x.is_integer() && !x.is_positive() {
        return Err(Error::Pole(x.to_string()));
    }
    gamma_real(&ctx.rat(x), ctx)
}

fn spouge(x: &BigFloat, ctx: &PrecisionContext) -> BigFloat {
    let target = ctx.internal_digits() as f64 * std::f64::consts::LN_10 + 4.0;
    let a = (target / (2.0 * std::f64::consts::PI).ln()).ceil() as i64 + 1;
    // the alternating coefficient sum cancels roughly a*log2(2 pi e) bits
    let w = ctx.working_bits() + 32 + (4 * a) as u32 + 64;
    let z = x.with_prec(w) - BigFloat::from_i64(1, w);
    let af = BigFloat::from_i64(a, w);
    let two_pi = BigFloat::pi(w).mul_pow2(1);
    let mut sum = two_pi.sqrt();
    let mut k_fact = BigFloat::from_i64(1, w);
    for k in 1..a {
        if k > 1 {
            k_fact = k_fact * BigFloat::from_i64(k - 1, w);
        }
        let base = BigFloat::from_i64(a - k, w);
        let expo = BigFloat::from_i64(2 * k - 1, w).mul_pow2(-1);
        let mut c = base.powf(&expo) * BigFloat::from_i64(a - k, w).exp() / &k_fact;
        if k % 2 == 0 {
            c = -c;
        }
        sum = sum + c / (&z + &BigFloat::from_i64(k, w));
    }
    let za = &z + &af;
    let expo = &z + &BigFloat::from_f64(0.5, w);
    let lead = (&expo * &za.ln() - &za).exp();
    (lead * sum).with_prec(x.prec())
}

/// `psi(u)` for `u > 0`: shift `u` up by unit steps until the asymptotic
/// series `ln z - 1/(2z) - sum B_2n / (2n z^2n)` reaches the internal
/// tolerance before its terms start growing, then recur back down.
pub fn digamma(u: &BigFloat, ctx: &PrecisionContext) -> Result<BigFloat> {
    if !u.is_positive() {
        return Err(Error::Domain(format!("digamma needs u > 0, got {u}")));
    }
    let bits = ctx.working_bits() + 32;
    let u = u.with_prec(bits);
    let tol = ctx.tolerance().with_prec(bits).mul_pow2(-8);
    let mut z_min = (0.5 * ctx.internal_digits() as f64 + 10.0).ceil();
    loop {
        let shift = (z_min - u.to_f64()).ceil().max(0.0) as i64;
        let z = &u + &BigFloat::from_i64(shift, bits);
        if let Some(asym) = digamma_asymptotic(&z, &tol) {
            let mut correction = BigFloat::zero(bits);
            for k in 0..shift {
                correction = correction + (&u + &BigFloat::from_i64(k, bits)).recip();
            }
            return Ok((asym - correction).with_prec(ctx.working_bits()));
        }
        z_min *= 2.0;
    }
}

fn digamma_asymptotic(z: &BigFloat, tol: &BigFloat) -> Option<BigFloat> {
    let bits = z.prec();
    let mut acc = z.ln() - z.recip().mul_pow2(-1);
    let z2 = z * z;
    let mut zpow = z2.clone();
    let mut last = None::<BigFloat>;
    for n in 1..10_000usize {
        let b = bernoulli(2 * n);
        let term = BigFloat::from_rat(&b, bits) / (BigFloat::from_i64(2 * n as i64, bits) * &zpow);
        let mag = term.abs();
        if mag < *tol {
            return Some(acc);
        }
        if let Some(prev) = &last {
            if mag >= *prev {
                return None;
            }
        }
        acc = acc - term;
        last = Some(mag);
        zpow = zpow * &z2;
    }
    None
}

/// Euler's constant, computed as `-psi(1)`.
pub fn euler_gamma(ctx: &PrecisionContext) -> BigFloat {
    -digamma(&ctx.one(), ctx).expect("psi(1) is in the domain")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int_rat, rat};

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    fn dec(s: &str, ctx: &PrecisionContext) -> BigFloat {
        BigFloat::parse_decimal(s, ctx.working_bits()).unwrap()
    }

    fn close(a: &BigFloat, b: &BigFloat, ctx: &PrecisionContext) -> bool {
        (a - b).abs() < ctx.output_tolerance()
    }

    const GAMMA: &str = "0.577215664901532860606512090082402431042159335939923598805767234884867726778";

    #[test]
    fn gamma_examples() {
        let ctx = ctx(60);
        assert!(close(&gamma_rat(&int_rat(1), &ctx).unwrap(), &ctx.one(), &ctx));
        assert!(close(&gamma_rat(&int_rat(5), &ctx).unwrap(), &ctx.int(24), &ctx));
        let sqrt_pi = BigFloat::pi(ctx.working_bits()).sqrt();
        assert!(close(&gamma_rat(&rat(1, 2), &ctx).unwrap(), &sqrt_pi, &ctx));
        assert_eq!(
            gamma_rat(&rat(1, 2), &ctx).unwrap().to_decimal_string(11),
            "1.7724538509"
        );
        let g13 = dec(
            "2.67893853470774763365569294097467764412868937795730110095042832759041761017",
            &ctx,
        );
        assert!(close(&gamma_rat(&rat(1, 3), &ctx).unwrap(), &g13, &ctx));
        let g14 = dec(
            "3.62560990822190831193068515586767200299516768288006546743337799956991924354",
            &ctx,
        );
        assert!(close(&gamma_rat(&rat(1, 4), &ctx).unwrap(), &g14, &ctx));
    }

    #[test]
    fn gamma_poles() {
        let ctx = ctx(10);
        assert!(matches!(gamma_rat(&int_rat(0), &ctx), Err(Error::Pole(_))));
        assert!(matches!(gamma_rat(&int_rat(-3), &ctx), Err(Error::Pole(_))));
        assert!(matches!(gamma_real(&ctx.int(-2), &ctx), Err(Error::Pole(_))));
        // Gamma(-1/2) = -2 sqrt(pi)
        let v = gamma_rat(&rat(-1, 2), &ctx).unwrap();
        let expect = -BigFloat::pi(ctx.working_bits()).sqrt().mul_pow2(1);
        assert!(close(&v, &expect, &ctx));
    }

    #[test]
    fn gamma_recurrence() {
        let ctx = ctx(40);
        for x in [rat(1, 3), rat(1, 2), rat(3, 2), rat(7, 4)] {
            let g = gamma_rat(&x, &ctx).unwrap();
            let g1 = gamma_rat(&(&x + int_rat(1)), &ctx).unwrap();
            assert!(close(&g1, &(ctx.rat(&x) * g), &ctx), "x = {x}");
        }
    }

    #[test]
    fn digamma_examples() {
        let ctx = ctx(40);
        let gamma = dec(GAMMA, &ctx);
        let psi1 = digamma(&ctx.one(), &ctx).unwrap();
        assert!(close(&psi1, &(-&gamma), &ctx));
        assert_eq!(psi1.to_decimal_string(10), "-0.5772156649");
        let psi2 = digamma(&ctx.int(2), &ctx).unwrap();
        assert!(close(&psi2, &(ctx.one() - &gamma), &ctx));
        assert_eq!(psi2.to_decimal_string(10), "0.4227843351");
        // psi(1/2) = -gamma - 2 ln 2
        let psi_half = digamma(&ctx.rat(&rat(1, 2)), &ctx).unwrap();
        let expect = -&gamma - BigFloat::ln2(ctx.working_bits()).mul_pow2(1);
        assert!(close(&psi_half, &expect, &ctx));
        assert_eq!(psi_half.to_decimal_string(11), "-1.9635100260");
        assert!(matches!(digamma(&ctx.zero(), &ctx), Err(Error::Domain(_))));
        assert!(matches!(digamma(&ctx.int(-1), &ctx), Err(Error::Domain(_))));
    }

    #[test]
    fn digamma_recurrence() {
        let ctx = ctx(40);
        for u in [rat(1, 4), rat(1, 2), int_rat(1), int_rat(3), int_rat(10)] {
            let uf = ctx.rat(&u);
            let lhs = digamma(&(&uf + &ctx.one()), &ctx).unwrap() - digamma(&uf, &ctx).unwrap();
            assert!(close(&lhs, &uf.recip(), &ctx), "u = {u}");
        }
    }

    #[test]
    fn euler_gamma_digits_and_escalation() {
        let c10 = ctx(10);
        assert_eq!(euler_gamma(&c10).to_decimal_string(10), "0.5772156649");
        let c30 = ctx(30);
        let c60 = ctx(60);
        let a = euler_gamma(&c30);
        let b = euler_gamma(&c60);
        assert!(close(&a, &b, &c30));
        let psi1 = digamma(&c60.one(), &c60).unwrap();
        assert!((euler_gamma(&c60) + psi1).abs() < c60.output_tolerance());
    }
}
