//! Principal branch of the Lambert W function on `[0, inf)`.

use crate::error::{Error, Result};
use crate::precision::{exp, log, Ball, Float, Mag, PrecisionContext};

/// `w e^w` at an exact point `w`.
fn w_exp_w(w: &Float, prec: u32) -> Ball {
    let b = Ball::exact(w.clone(), prec);
    &b * &exp(&b)
}

/// Starting bracket: `[ln x - ln ln x, ln x]` for `x >= e`, `[0, x]` below.
fn initial_guess(x: f64) -> f64 {
    if x >= std::f64::consts::E {
        let l = x.ln();
        let lo = l - l.ln();
        0.5 * (lo + l)
    } else {
        0.5 * x
    }
}

/// Newton iterate on the midpoint: `w <- w - (w e^w - x) / (e^w (w + 1))`.
fn newton_point(x: &Float, prec: u32) -> Float {
    let xf = x.to_f64();
    let mut w = if xf.is_finite() {
        let mut w = initial_guess(xf);
        for _ in 0..60 {
            let ew = w.exp();
            let step = (w * ew - xf) / (ew * (w + 1.0));
            w -= step;
            if step.abs() < 1e-15 * w.abs().max(1e-300) {
                break;
            }
        }
        Float::from_f64(w)
    } else {
        // x beyond f64 range: w ~ ln x - ln ln x
        let lx = log(&Ball::exact(x.clone(), 64)).expect("x > 0").to_f64();
        Float::from_f64(lx - lx.ln())
    };
    let wp = prec + 16;
    let xb = Ball::exact(x.clone(), wp);
    for _ in 0..64 {
        let wb = Ball::exact(w.clone(), wp);
        let ew = exp(&wb);
        let f = &(&wb * &ew) - &xb;
        let df = &ew * &(&wb + &Ball::one(wp));
        let Ok(step) = f.div(&df) else { break };
        w = (&wb - &step).mid().clone();
        if step.mid().is_zero() || step.mid().top() < w.top().max(0) - wp as i64 {
            break;
        }
    }
    w
}

/// Ball containing `W(x)` for every `x` in the input ball.
///
/// The enclosure is verified by bracketing: `w e^w` is increasing on `[0, inf)`, so
/// `lo e^lo < inf(x)` and `hi e^hi > sup(x)` prove `W(x) in [lo, hi]`.
pub fn lambert_w_prec(x: &Ball, prec: u32) -> Result<Ball> {
    if x.is_exact() && x.mid().is_zero() {
        return Ok(Ball::zero(prec));
    }
    if !x.is_positive() {
        return Err(Error::Domain("lambert_w is implemented for x > 0 (principal branch)".into()));
    }
    let wp = prec + 16;
    let w = newton_point(x.mid(), wp);
    let x_lo = x.lower();
    let x_hi = x.upper();
    // eps ~ residual / derivative plus the input radius effect plus one ulp
    let wb = Ball::exact(w.clone(), wp);
    let ew = exp(&wb);
    let deriv = Mag::from_float_lower(&(&ew * &(&wb + &Ball::one(wp))).lower());
    let resid = (&(&wb * &ew) - &Ball::exact(x.mid().clone(), wp)).mag_upper();
    let mut eps = resid.add(&x.rad()).div(&deriv).add(&Mag::pow2(w.top().max(0) - wp as i64)).mul(&Mag::from_u64(2));
    for _ in 0..200 {
        let e = eps.to_float();
        let lo = w.sub(&e).max(Float::zero());
        let hi = w.add(&e);
        let lo_ok = lo.is_zero() || w_exp_w(&lo, wp).upper() < x_lo;
        let hi_ok = w_exp_w(&hi, wp).lower() > x_hi;
        if lo_ok && hi_ok {
            return Ok(Ball::from_endpoints(&lo, &hi, prec));
        }
        eps = eps.mul(&Mag::from_u64(2));
    }
    Err(Error::Domain("lambert_w bracket verification failed".into()))
}

/// `W(x)` at the context's working precision.
pub fn lambert_w(x: &Ball, ctx: &PrecisionContext) -> Result<Ball> {
    lambert_w_prec(x, ctx.working_bits())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::e_const;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40).unwrap()
    }

    #[test]
    fn w_of_zero_and_e() {
        let c = ctx();
        let z = lambert_w(&Ball::zero(c.working_bits()), &c).unwrap();
        assert!(z.is_exact() && z.mid().is_zero());
        let e = e_const(c.working_bits());
        let w = lambert_w(&e, &c).unwrap();
        assert!(w.contains(&Float::one()));
        assert!(w.rad().to_f64() < 1e-35);
    }

    #[test]
    fn w_of_one_against_bisection_oracle() {
        // bisection on w e^w - 1 over [0.5, 0.6] in f64
        let (mut a, mut b) = (0.5f64, 0.6f64);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if m * m.exp() < 1.0 {
                a = m;
            } else {
                b = m;
            }
        }
        let c = ctx();
        let w = lambert_w(&Ball::one(c.working_bits()), &c).unwrap();
        assert!((w.to_f64() - a).abs() < 1e-15);
        assert!((w.to_f64() - 0.5671432904097838).abs() < 1e-15);
    }

    #[test]
    fn rejects_negative() {
        let c = ctx();
        assert!(lambert_w(&Ball::from_i64(-1, 64), &c).is_err());
    }

    #[test]
    fn large_argument() {
        let c = ctx();
        let x = Ball::from_i64(1_000_000, c.working_bits());
        let w = lambert_w(&x, &c).unwrap();
        let back = &w * &exp(&w);
        assert!(back.contains(&Float::from_i64(1_000_000)));
    }
}
