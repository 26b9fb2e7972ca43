//! Elementary functions and constants on balls.
//!
//! Point values are computed by truncated series in ball arithmetic at a raised working
//! precision; the truncation remainder is added to the radius explicitly, and the input
//! radius is propagated with a derivative bound.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;

use super::ball::Ball;
use super::float::Float;
use super::mag::Mag;
use crate::error::{Error, Result};

/// Extra bits carried inside the series evaluations.
const INNER_GUARD: u32 = 24;

type ConstCache = Mutex<BTreeMap<u32, Ball>>;

fn cached(cell: &'static OnceLock<ConstCache>, prec: u32, compute: fn(u32) -> Ball) -> Ball {
    let cache = cell.get_or_init(|| Mutex::new(BTreeMap::new()));
    {
        let guard = cache.lock().expect("constant cache poisoned");
        if let Some((_, b)) = guard.range(prec..).next() {
            return b.with_prec(prec);
        }
    }
    let value = compute(prec);
    cache.lock().expect("constant cache poisoned").entry(prec).or_insert_with(|| value.clone());
    value
}

/// `atanh(1/q) = sum 1/((2i+1) q^(2i+1))`, positive terms with geometric tail.
fn atanh_recip(q: i64, prec: u32) -> Ball {
    let wp = prec + INNER_GUARD;
    let q2 = Ball::from_i64(q * q, wp);
    let mut power = Ball::one(wp).div_int(q);
    let mut sum = power.clone();
    let mut i = 1i64;
    loop {
        power = power.div(&q2).expect("q^2 non-zero");
        let term = power.div_int(2 * i + 1);
        sum = &sum + &term;
        i += 1;
        if term.mag_upper().top() < -(wp as i64) - 4 {
            // Tail < next power / (1 - 1/q^2) <= 2 * power / q^2
            let tail = power.mag_upper().mul(&Mag::from_u64(2)).div(&Mag::from_u64((q * q) as u64));
            return sum.add_error(tail).with_prec(prec);
        }
    }
}

/// `atan(1/q)` by the alternating series; the tail is bounded by the first omitted term.
fn atan_recip(q: i64, prec: u32) -> Ball {
    let wp = prec + INNER_GUARD;
    let q2 = Ball::from_i64(q * q, wp);
    let mut power = Ball::one(wp).div_int(q);
    let mut sum = power.clone();
    let mut i = 1i64;
    loop {
        power = power.div(&q2).expect("q^2 non-zero");
        let term = power.div_int(2 * i + 1);
        sum = if i % 2 == 1 { &sum - &term } else { &sum + &term };
        i += 1;
        if term.mag_upper().top() < -(wp as i64) - 4 {
            let next = power.div(&q2).expect("q^2 non-zero").div_int(2 * i + 1);
            return sum.add_error(next.mag_upper()).with_prec(prec);
        }
    }
}

fn compute_ln2(prec: u32) -> Ball {
    atanh_recip(3, prec + 8).mul_2exp(1).with_prec(prec)
}

fn compute_pi(prec: u32) -> Ball {
    let wp = prec + 8;
    let a = atan_recip(5, wp).mul_int(16);
    let b = atan_recip(239, wp).mul_int(4);
    (&a - &b).with_prec(prec)
}

/// `ln 2`.
pub fn ln2(prec: u32) -> Ball {
    static CACHE: OnceLock<ConstCache> = OnceLock::new();
    cached(&CACHE, prec, compute_ln2)
}

/// `pi` by Machin's formula.
pub fn pi(prec: u32) -> Ball {
    static CACHE: OnceLock<ConstCache> = OnceLock::new();
    cached(&CACHE, prec, compute_pi)
}

/// Euler's number.
pub fn e_const(prec: u32) -> Ball {
    static CACHE: OnceLock<ConstCache> = OnceLock::new();
    cached(&CACHE, prec, |p| exp(&Ball::one(p)))
}

/// `exp(x)` for a point `x`.
fn exp_point(x: &Float, prec: u32) -> Ball {
    if x.is_zero() {
        return Ball::one(prec);
    }
    // Reduce to |s| <= 2^-r0 and square back `r` times.
    let r0 = ((prec as f64).sqrt() / 2.0).ceil() as i64 + 2;
    let r = (x.top() + r0).max(0);
    let wp = prec + INNER_GUARD + r as u32 + 8;
    let s = Ball::exact(x.mul_2exp(-r), wp);
    let s_mag = s.mag_upper();
    let mut term = Ball::one(wp);
    let mut sum = Ball::one(wp);
    let mut k = 1i64;
    loop {
        term = (&term * &s).div_int(k);
        sum = &sum + &term;
        k += 1;
        let t = term.mag_upper();
        if t.is_zero() || t.top() < -(wp as i64) - 4 {
            // Remainder <= |term| * |s|/(k) / (1 - |s|) <= 2 |term| |s|
            let tail = t.mul(&s_mag).mul(&Mag::from_u64(2));
            sum = sum.add_error(tail);
            break;
        }
    }
    for _ in 0..r {
        sum = sum.sqr();
    }
    sum.with_prec(prec)
}

/// Exponential.
pub fn exp(x: &Ball) -> Ball {
    let prec = x.prec();
    let e = exp_point(x.mid(), prec);
    if x.rad().is_zero() {
        return e;
    }
    // exp(m + d) - exp(m) <= exp(m) (e^|d| - 1)
    let spread = e.mag_upper().mul(&x.rad().expm1_upper());
    e.add_error(spread)
}

/// `log(x)` for a positive point `x`.
fn log_point(x: &Float, prec: u32) -> Ball {
    if *x == Float::one() {
        return Ball::zero(prec);
    }
    let wp = prec + INNER_GUARD + 8;
    // x = f * 2^k with f in [1/sqrt2, sqrt2)
    let bits = x.bits() as i64;
    let mut k = x.exponent() + bits;
    let mut f = Float::new(x.mantissa().clone(), -bits);
    if f < Float::from_f64(std::f64::consts::FRAC_1_SQRT_2) {
        f = f.mul_2exp(1);
        k -= 1;
    }
    let fb = Ball::exact(f, wp);
    let one = Ball::one(wp);
    let z = (&fb - &one).div(&(&fb + &one)).expect("f + 1 > 0");
    let z2 = z.sqr();
    let mut power = z.clone();
    let mut sum = z.clone();
    let mut i = 1i64;
    if !z.mid().is_zero() {
        loop {
            power = &power * &z2;
            let term = power.div_int(2 * i + 1);
            sum = &sum + &term;
            i += 1;
            if term.mag_upper().top() < -(wp as i64) - 4 {
                // |tail| <= |z|^(2i+1) / ((2i+1)(1 - z^2)), z^2 <= 0.03
                let tail = power.mag_upper().mul(&z2.mag_upper()).mul(&Mag::from_u64(2));
                sum = sum.add_error(tail);
                break;
            }
        }
    }
    let log_f = sum.mul_2exp(1);
    let res = if k == 0 { log_f } else { &log_f + &ln2(wp).mul_int(k) };
    res.with_prec(prec)
}

/// Natural logarithm; the ball must be strictly positive.
pub fn log(x: &Ball) -> Result<Ball> {
    if !x.is_positive() {
        return Err(Error::Domain("log requires a strictly positive ball".into()));
    }
    let l = log_point(x.mid(), x.prec());
    if x.rad().is_zero() {
        return Ok(l);
    }
    // |log(y) - log(m)| <= r / (m - r)
    let lo = Mag::from_float_lower(&x.lower());
    Ok(l.add_error(x.rad().div(&lo)))
}

/// Square root; the ball must be strictly positive (or exactly zero).
pub fn sqrt(x: &Ball) -> Result<Ball> {
    let prec = x.prec();
    if x.mid().is_zero() && x.rad().is_zero() {
        return Ok(Ball::zero(prec));
    }
    if !x.is_positive() {
        return Err(Error::Domain("sqrt requires a strictly positive ball".into()));
    }
    let m = x.mid();
    let target = 2 * (prec as i64 + 4);
    let mut shift = (target - m.bits() as i64).max(0);
    if (m.exponent() - shift).rem_euclid(2) != 0 {
        shift += 1;
    }
    let scaled: BigInt = m.mantissa() << (shift as usize);
    let q = scaled.sqrt();
    let exp = (m.exponent() - shift) / 2;
    let exact = &q * &q == scaled;
    let root = Float::new(q, exp);
    let floor_root = Mag::from_float_lower(&root);
    let mut res = Ball::exact(root, prec);
    if !exact {
        res = res.add_error(Mag::pow2(exp));
    }
    if !x.rad().is_zero() {
        // |sqrt(y) - sqrt(m)| <= r / sqrt(m)
        res = res.add_error(x.rad().div(&floor_root));
    }
    Ok(res)
}

/// Integer power.
pub fn pow_int(x: &Ball, k: i64) -> Result<Ball> {
    if k >= 0 {
        Ok(x.pow_u(k as u64))
    } else {
        x.pow_u(k.unsigned_abs()).recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_zero_is_exact_one() {
        let r = exp(&Ball::zero(128));
        assert!(r.is_exact());
        assert_eq!(r.mid(), &Float::one());
    }

    #[test]
    fn exp_matches_f64() {
        for v in [-30.0, -1.0, -1e-5, 0.5, 1.0, 7.25, 100.0] {
            let b = exp(&Ball::from_f64(v, 200));
            let got = b.to_f64();
            assert!((got / f64::exp(v) - 1.0).abs() < 1e-14, "exp({v}) = {got}");
            assert!(b.rad().to_f64() <= got * 2f64.powi(-190));
        }
    }

    #[test]
    fn exp_minus_one_against_alternating_series() {
        // sum_{k<=60} (-1)^k / k! with tail < 1/61!, evaluated in exact rationals.
        use num_rational::BigRational;
        let mut sum = BigRational::from_integer(0.into());
        let mut fact = BigInt::from(1);
        for k in 0..=60i64 {
            if k > 0 {
                fact *= k;
            }
            let term = BigRational::new(BigInt::from(1), fact.clone());
            sum = if k % 2 == 0 { sum + term } else { sum - term };
        }
        let oracle = Ball::from_rational(&sum, 300).add_error(Mag::pow2(-270));
        let e = exp(&Ball::from_i64(-1, 256));
        assert!(oracle.overlaps(&e));
        assert!(e.contains(&Float::from_f64(0.36787944117144233)) || e.rad().to_f64() < 1e-70);
    }

    #[test]
    fn log_inverts_exp() {
        let one = Ball::one(256);
        let l = log(&exp(&one)).unwrap();
        assert!(l.contains(&Float::one()));
        assert!(l.rad().to_f64() < 1e-70);
        let l2 = log(&Ball::from_i64(2, 256)).unwrap();
        assert!(l2.overlaps(&ln2(256)));
    }

    #[test]
    fn log_rejects_nonpositive() {
        assert!(log(&Ball::zero(64)).is_err());
        assert!(log(&Ball::from_i64(-2, 64)).is_err());
    }

    #[test]
    fn sqrt_squares_back() {
        let two = Ball::from_i64(2, 256);
        let r = sqrt(&two).unwrap();
        assert!(r.sqr().contains(&Float::from_i64(2)));
        let nine = sqrt(&Ball::from_i64(9, 64)).unwrap();
        assert!(nine.is_exact());
        assert_eq!(nine.mid(), &Float::from_i64(3));
        assert!(sqrt(&Ball::from_i64(-1, 64)).is_err());
    }

    #[test]
    fn pi_digits() {
        let p = pi(256);
        assert!(p.rad().to_f64() < 1e-70);
        assert!((p.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn negative_integer_power() {
        let r = pow_int(&Ball::from_i64(2, 64), -3).unwrap();
        assert_eq!(r.mid(), &Float::from_f64(0.125));
    }
}
