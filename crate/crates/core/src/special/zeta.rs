//! Riemann zeta at integers `s >= 2` and the Euler-Mascheroni constant.
//!
//! Both use Euler-Maclaurin summation. For `f(x) = x^-s` (and `1/x`) every even derivative
//! has the same sign on `[N, inf)`, so the remainder after `M` correction terms is bounded
//! by the first omitted term.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::bernoulli::bernoulli;
use super::integer::factorial;
use crate::error::{Error, Result};
use crate::precision::{log, pi, Ball, Mag, PrecisionContext};

fn rational_ball(q: &BigRational, prec: u32) -> Ball {
    Ball::from_rational(q, prec)
}

/// `zeta(s)` by Euler-Maclaurin summation, for any integer `s >= 2`.
pub fn zeta_euler_maclaurin(s: u32, prec: u32) -> Result<Ball> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta({s}) is not defined by this routine (s >= 2)")));
    }
    let wp = prec + 20;
    let target = -(wp as i64) - 4;
    let mut n_terms: u64 = (wp as u64 / 6).max(8);
    loop {
        if let Some(v) = zeta_em_attempt(s, n_terms, wp, target) {
            return Ok(v.with_prec(prec));
        }
        n_terms *= 2;
    }
}

/// One Euler-Maclaurin evaluation with `n` summed terms; `None` if the correction terms
/// stop decreasing before reaching `2^target`.
fn zeta_em_attempt(s: u32, n: u64, wp: u32, target: i64) -> Option<Ball> {
    let big_n = Ball::from_i64(n as i64, wp);
    let mut sum = Ball::zero(wp);
    for k in 1..n {
        let kp = Ball::from_bigint(&num_traits::pow(BigInt::from(k), s as usize), wp);
        sum = &sum + &kp.recip().expect("k^s > 0");
    }
    let n_pow_s = Ball::from_bigint(&num_traits::pow(BigInt::from(n), s as usize), wp);
    let n_neg_s = n_pow_s.recip().expect("N^s > 0");
    // N^(1-s)/(s-1) + N^-s/2
    sum = &sum + &(&n_neg_s * &big_n).div_int(s as i64 - 1);
    sum = &sum + &n_neg_s.mul_2exp(-1);
    let n2 = Ball::from_i64((n * n) as i64, wp);
    // power = N^(-s-2j+1); rising = s (s+1) ... (s+2j-2)
    let mut power = (&n_neg_s * &big_n).div(&n2).ok()?;
    let mut rising = BigRational::from_integer(BigInt::from(s));
    let mut prev: Option<Mag> = None;
    let mut j: usize = 1;
    loop {
        let coeff = bernoulli(2 * j) * &rising / BigRational::from_integer(factorial(2 * j as u64).into());
        let term = &rational_ball(&coeff, wp) * &power;
        let mag = term.mag_upper();
        if let Some(p) = prev {
            if mag > p {
                return None;
            }
        }
        if mag.top() < target {
            // `term` is the first omitted correction.
            return Some(sum.add_error(mag));
        }
        sum = &sum + &term;
        prev = Some(mag);
        let a = BigInt::from(s as usize + 2 * j - 1);
        let b = BigInt::from(s as usize + 2 * j);
        rising *= BigRational::from_integer(a * b);
        power = power.div(&n2).ok()?;
        j += 1;
    }
}

/// `zeta(2j) = (-1)^(j+1) B_2j (2 pi)^(2j) / (2 (2j)!)`.
pub fn zeta_even_closed_form(s: u32, prec: u32) -> Result<Ball> {
    if s < 2 || s % 2 == 1 {
        return Err(Error::Domain(format!("closed form needs a positive even argument, got {s}")));
    }
    let wp = prec + 16 + s;
    let b = bernoulli(s as usize).abs();
    let coeff = b / BigRational::from_integer(BigInt::from(2) * BigInt::from(factorial(s as u64)));
    let two_pi = pi(wp).mul_2exp(1);
    Ok((&rational_ball(&coeff, wp) * &two_pi.pow_u(s as u64)).with_prec(prec))
}

/// `zeta(s)` at `prec` bits: closed form for even `s`, Euler-Maclaurin for odd `s`.
pub fn zeta_int_prec(s: u32, prec: u32) -> Result<Ball> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta({s}) requires s >= 2")));
    }
    if s.is_multiple_of(2) {
        zeta_even_closed_form(s, prec)
    } else {
        zeta_euler_maclaurin(s, prec)
    }
}

/// `zeta(j)` for integer `j >= 2`, with radius below `10^-target_digits`.
pub fn zeta_int(j: i64, ctx: &PrecisionContext) -> Result<Ball> {
    if j < 2 {
        return Err(Error::Domain(format!("zeta({j}) requires j >= 2")));
    }
    zeta_int_prec(j as u32, ctx.working_bits())
}

/// Euler-Mascheroni constant at `prec` bits:
/// `gamma = H_N - ln N - 1/(2N) + sum_{k=1}^{M} B_2k / (2k N^2k) + R`.
pub fn euler_gamma_prec(prec: u32) -> Ball {
    let wp = prec + 20;
    let target = -(wp as i64) - 4;
    let n = (wp as u64 / 8).max(8);
    let n_big = BigInt::from(n);
    let mut q = BigRational::zero();
    for k in 1..=n {
        q += BigRational::new(BigInt::one(), BigInt::from(k));
    }
    q -= BigRational::new(BigInt::one(), BigInt::from(2 * n));
    let n2 = &n_big * &n_big;
    let mut n_pow = n2.clone();
    let mut k = 1usize;
    let remainder = loop {
        let corr = bernoulli(2 * k) / BigRational::from_integer(BigInt::from(2 * k) * &n_pow);
        let mag = Ball::from_rational(&corr.abs(), 64).mag_upper();
        if mag.top() < target {
            break mag;
        }
        q += corr;
        n_pow *= &n2;
        k += 1;
    };
    let ln_n = log(&Ball::from_i64(n as i64, wp)).expect("ln N, N > 0");
    (&Ball::from_rational(&q, wp) - &ln_n).add_error(remainder).with_prec(prec)
}

/// Euler-Mascheroni constant with radius below `10^-target_digits`.
pub fn euler_gamma(ctx: &PrecisionContext) -> Ball {
    euler_gamma_prec(ctx.working_bits())
}
