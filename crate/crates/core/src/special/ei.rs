//! Exponential integral `Ei(x) = gamma + ln|x| + sum_{k>=1} x^k / (k k!)` for real `x != 0`.

use super::zeta::euler_gamma_prec;
use crate::error::{Error, Result};
use crate::precision::{log, Ball, Mag, PrecisionContext};

/// `sum_{k>=1} x^k / (k k!)` with a certified tail.
///
/// Once `k + 1 > 2|x|` the term ratio is below 1/2, so the remainder is at most twice
/// the next term.
pub fn ein_series(x: &Ball, prec: u32) -> Ball {
    let x_mag = x.mag_upper().to_f64();
    // cancellation for negative x costs about |x| log2(e) bits
    let wp = prec + 16 + (x_mag * 1.45).ceil() as u32;
    let xb = x.with_prec(wp);
    let mut power = Ball::one(wp); // x^k / k!
    let mut sum = Ball::zero(wp);
    let mut k: i64 = 1;
    loop {
        power = (&power * &xb).div_int(k);
        let term = power.div_int(k);
        sum = &sum + &term;
        let next_k = k + 1;
        if (next_k as f64) > 2.0 * x_mag + 1.0 {
            let next = power.mag_upper().mul(&x.mag_upper()).div(&Mag::from_u64((next_k * next_k) as u64));
            if next.is_zero() || next.top() < -(wp as i64) - 4 {
                return sum.add_error(next.mul(&Mag::from_u64(2))).with_prec(prec);
            }
        }
        k = next_k;
    }
}

/// `Ei(x)` at `prec` bits. The ball must exclude zero.
pub fn ei_prec(x: &Ball, prec: u32) -> Result<Ball> {
    if x.contains_zero() {
        return Err(Error::Domain("Ei is singular at 0".into()));
    }
    let wp = prec + 16;
    let gamma = euler_gamma_prec(wp);
    let ln_abs = log(&x.abs().with_prec(wp))?;
    let series = ein_series(x, wp);
    Ok((&(&gamma + &ln_abs) + &series).with_prec(prec))
}

/// `Ei(x)` at the context's working precision.
pub fn ei(x: &Ball, ctx: &PrecisionContext) -> Result<Ball> {
    ei_prec(x, ctx.working_bits())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{e_const, enclose_decimal, to_decimal_truncated, Float};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40).unwrap()
    }

    #[test]
    fn ei_minus_one_is_minus_delta_over_e() {
        let c = ctx();
        let v = ei(&Ball::from_i64(-1, c.working_bits()), &c).unwrap();
        // -0.2193839343955202736771637754601216...
        assert_eq!(to_decimal_truncated(&v, 10).0, "-0.2193839343");
        // delta from the table (0.5963473623...) divided by e, truncated to 10 digits
        let delta = enclose_decimal("0.5963473623", &c).unwrap();
        let approx = delta.div(&e_const(c.working_bits())).unwrap();
        assert!((v.to_f64() + approx.to_f64()).abs() < 1e-10);
    }

    #[test]
    fn alternating_delta_star() {
        let c = ctx();
        let e = e_const(c.working_bits());
        let ds = -(&e * &ei(&Ball::one(c.working_bits()), &c).unwrap());
        assert_eq!(to_decimal_truncated(&ds, 6).0, "-5.151464");
    }

    #[test]
    fn series_definition_consistency() {
        let c = ctx();
        let p = c.working_bits();
        let gamma = euler_gamma_prec(p);
        // gamma + sum_{k<=K} 1/(k k!) + [0, tail] must meet Ei(1)
        let mut s = 0.0f64;
        let mut fact = 1.0f64;
        for k in 1..=25 {
            fact *= k as f64;
            s += 1.0 / (k as f64 * fact);
        }
        let partial = &gamma + &Ball::from_f64(s, p).add_error(Mag::from_f64_upper(1e-15));
        let e1 = ei(&Ball::one(p), &c).unwrap();
        assert!(partial.overlaps(&e1));
    }

    #[test]
    fn zero_is_rejected() {
        let c = ctx();
        assert!(ei(&Ball::zero(64), &c).is_err());
        let straddle = Ball::new(Float::from_f64(0.1), Mag::from_f64_upper(0.2), 64);
        assert!(ei(&straddle, &c).is_err());
    }
}
