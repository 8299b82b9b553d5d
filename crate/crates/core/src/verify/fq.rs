use num_traits::{One, Signed, Zero};

use super::report::IdentityReport;
use crate::error::{Error, Result};
use crate::exactmath::{binom_gen, factorial, int_rat, BigRat};
use crate::reference::{gamma_rat, quad_semi_infinite, BigFloat, Integrand, PrecisionContext};

fn prefactor(q: &BigRat, r: u32, ctx: &PrecisionContext) -> Result<BigFloat> {
    let c = binom_gen(q, r as u64);
    Ok(ctx.rat(&c) / gamma_rat(&(q + BigRat::one()), ctx)?)
}

fn check_order(q: &BigRat, u: &BigRat) -> Result<()> {
    if *q <= -BigRat::one() {
        return Err(Error::Domain(format!("order must be > -1, got {q}")));
    }
    if u.is_negative() {
        return Err(Error::Domain(format!("u must be >= 0, got {u}")));
    }
    Ok(())
}

/// `f_q(u) = C(q, r) / Gamma(q+1) * int_0^inf x^(q-1) e^-x ln(x u + 1) dx`, `q > -1`.
pub fn f_eval(q: &BigRat, r: u32, u: &BigRat, ctx: &PrecisionContext) -> Result<BigFloat> {
    check_order(q, u)?;
    if u.is_zero() {
        return Ok(ctx.zero());
    }
    let integrand = Integrand::power_log(q - BigRat::one(), u.clone());
    Ok(prefactor(q, r, ctx)? * quad_semi_infinite(&integrand, ctx)?)
}

/// `d^i/du^i f_q(u)` through the differentiated integrand
/// `(-1)^(i-1) (i-1)! x^(q-1) (x / (x u + 1))^i e^-x`.
pub fn f_deriv(q: &BigRat, r: u32, u: &BigRat, order: u32, ctx: &PrecisionContext) -> Result<BigFloat> {
    if order == 0 {
        return f_eval(q, r, u, ctx);
    }
    check_order(q, u)?;
    let integrand = Integrand::power_rational(q - BigRat::one() + int_rat(order as i64), u.clone(), order);
    let mut scale = ctx.bigint(&factorial(order as usize - 1));
    if order.is_multiple_of(2) {
        scale = -scale;
    }
    Ok(prefactor(q, r, ctx)? * scale * quad_semi_infinite(&integrand, ctx)?)
}

fn fq_params(eps: &BigRat, r: u32, u: &BigRat) -> Vec<(&'static str, BigRat)> {
    vec![("eps", eps.clone()), ("r", int_rat(r as i64)), ("u", u.clone())]
}

/// `f_(eps+1) = eps/(eps+1-r) f_eps + u/(eps+1-r) f'_eps` within `10^-(D-5)`.
pub fn check_base_recurrence(eps: &BigRat, r: u32, u: &BigRat, ctx: &PrecisionContext) -> Result<IdentityReport> {
    const NAME: &str = "base_recurrence";
    let den = eps + int_rat(1 - r as i64);
    if den.is_zero() {
        return Ok(IdentityReport::skipped(
            NAME,
            fq_params(eps, r, u),
            format!("eps + 1 - r = 0 at eps = {eps}"),
        ));
    }
    let lhs = f_eval(&(eps + BigRat::one()), r, u, ctx)?;
    let rhs = ctx.rat(&(eps / &den)) * f_eval(eps, r, u, ctx)? + ctx.rat(&(u / &den)) * f_deriv(eps, r, u, 1, ctx)?;
    let tol = ctx.pow10_neg(ctx.decimal_digits().saturating_sub(5));
    Ok(IdentityReport::numeric(NAME, fq_params(eps, r, u), lhs, rhs, tol))
}

/// `f_(eps+j) = C(eps+j-r, j)^-1 sum_{i=0}^j C(eps+j-1, j-i) u^i/i! f_eps^(i)`
/// within `10^-(D-8)`.
pub fn check_diff_equality(j: u32, eps: &BigRat, r: u32, u: &BigRat, ctx: &PrecisionContext) -> Result<IdentityReport> {
    const NAME: &str = "diff_equality";
    let mut params = vec![("j", int_rat(j as i64))];
    params.extend(fq_params(eps, r, u));
    if j == 0 {
        return Err(Error::Domain("j must be >= 1".into()));
    }
    let lead = binom_gen(&(eps + int_rat(j as i64 - r as i64)), j as u64);
    if lead.is_zero() {
        return Ok(IdentityReport::skipped(
            NAME,
            params,
            format!("C(eps+{j}-{r}, {j}) = 0"),
        ));
    }
    let lhs = f_eval(&(eps + int_rat(j as i64)), r, u, ctx)?;
    let mut rhs = ctx.zero();
    let mut u_pow = BigRat::one();
    for i in 0..=j {
        if i > 0 {
            u_pow = u_pow * u / int_rat(i as i64);
        }
        let c = binom_gen(&(eps + int_rat(j as i64 - 1)), (j - i) as u64) * &u_pow;
        if c.is_zero() {
            continue;
        }
        rhs = rhs + ctx.rat(&c) * f_deriv(eps, r, u, i, ctx)?;
    }
    let rhs = rhs * ctx.rat(&lead.recip());
    let tol = ctx.pow10_neg(ctx.decimal_digits().saturating_sub(8));
    Ok(IdentityReport::numeric(NAME, params, lhs, rhs, tol))
}
