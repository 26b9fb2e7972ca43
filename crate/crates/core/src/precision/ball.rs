//! Midpoint-radius real balls.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use super::context::PrecisionContext;
use super::float::Float;
use super::mag::Mag;
use crate::error::{Error, Result};

/// A real ball `[mid - rad, mid + rad]` carrying the binary precision its midpoint is rounded to.
///
/// Binary operations run at the larger precision of their operands. Every result
/// encloses the exact result of the operation applied to any points of the operand balls.
#[derive(Clone, PartialEq, Eq)]
pub struct Ball {
    mid: Float,
    rad: Mag,
    prec: u32,
}

/// Rounds `value` to `prec` bits and returns it together with the rounding error bound.
fn round_mid(value: Float, prec: u32) -> (Float, Mag) {
    match value.round_nearest_err(prec) {
        (r, None) => (r, Mag::zero()),
        (r, Some(e)) => (r, Mag::pow2(e)),
    }
}

impl Ball {
    pub fn new(mid: Float, rad: Mag, prec: u32) -> Self {
        let (mid, err) = round_mid(mid, prec);
        Ball { mid, rad: rad.add(&err), prec }
    }

    pub fn exact(mid: Float, prec: u32) -> Self {
        Ball::new(mid, Mag::zero(), prec)
    }

    pub fn zero(prec: u32) -> Self {
        Ball { mid: Float::zero(), rad: Mag::zero(), prec }
    }

    pub fn one(prec: u32) -> Self {
        Ball { mid: Float::one(), rad: Mag::zero(), prec }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Ball::exact(Float::from_i64(v), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Ball::exact(Float::from_bigint(v.clone()), prec)
    }

    pub fn from_biguint(v: &BigUint, prec: u32) -> Self {
        Ball::exact(Float::from_biguint(v.clone()), prec)
    }

    /// Encloses the exact rational `q`; radius is zero when `q` is dyadic and fits.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let num = Ball::from_bigint(q.numer(), prec + 8);
        let den = Ball::from_bigint(q.denom(), prec + 8);
        num.div(&den).expect("rational denominator is non-zero").with_prec(prec)
    }

    /// Encloses `f64` exactly (rounded to `prec` if needed).
    pub fn from_f64(v: f64, prec: u32) -> Self {
        Ball::exact(Float::from_f64(v), prec)
    }

    pub fn with_ctx(ctx: &PrecisionContext) -> Self {
        Ball::zero(ctx.working_bits())
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Rounds the midpoint to a new precision, widening the radius as needed.
    pub fn with_prec(&self, prec: u32) -> Ball {
        Ball::new(self.mid.clone(), self.rad, prec)
    }

    /// Returns the ball with its radius increased by `extra`.
    pub fn add_error(&self, extra: Mag) -> Ball {
        Ball { mid: self.mid.clone(), rad: self.rad.add(&extra), prec: self.prec }
    }

    /// Exact point ball at the midpoint (drops the radius).
    pub fn midpoint_ball(&self) -> Ball {
        Ball { mid: self.mid.clone(), rad: Mag::zero(), prec: self.prec }
    }

    pub fn lower(&self) -> Float {
        self.mid.sub(&self.rad.to_float())
    }

    pub fn upper(&self) -> Float {
        self.mid.add(&self.rad.to_float())
    }

    /// Upper bound for `|x|` over the ball.
    pub fn mag_upper(&self) -> Mag {
        Mag::from_float_upper(&self.mid).add(&self.rad)
    }

    /// Lower bound for `|x|` over the ball (zero if the ball contains zero).
    pub fn mag_lower(&self) -> Mag {
        Mag::from_float_lower(&self.mid).sub_lower(&self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Float::zero())
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    /// Whether `other` lies entirely inside `self`.
    pub fn contains_ball(&self, other: &Ball) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    pub fn is_positive(&self) -> bool {
        self.lower().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.upper().is_negative()
    }

    /// Sign if the ball excludes zero.
    pub fn sign(&self) -> Option<i32> {
        if self.is_positive() {
            Some(1)
        } else if self.is_negative() {
            Some(-1)
        } else if self.mid.is_zero() && self.rad.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// Compares balls when they are disjoint.
    pub fn partial_cmp_ball(&self, other: &Ball) -> Option<Ordering> {
        if self.upper() < other.lower() {
            Some(Ordering::Less)
        } else if other.upper() < self.lower() {
            Some(Ordering::Greater)
        } else if self.is_exact() && other.is_exact() && self.mid == other.mid {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Width `2 * rad` as an upper bound.
    pub fn width(&self) -> Mag {
        self.rad.mul_2exp(1)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Smallest ball containing both operands.
    pub fn union(&self, other: &Ball) -> Ball {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        Ball::from_endpoints(&lo, &hi, self.prec.max(other.prec))
    }

    /// Ball containing `[lo, hi]`.
    pub fn from_endpoints(lo: &Float, hi: &Float, prec: u32) -> Ball {
        let mid = lo.add(hi).mul_2exp(-1);
        let (mid, err) = round_mid(mid, prec);
        let half = hi.sub(lo).mul_2exp(-1);
        let rad = Mag::from_float_upper(&half).add(&err);
        Ball { mid, rad, prec }
    }

    /// Intersection, if non-empty.
    pub fn intersect(&self, other: &Ball) -> Option<Ball> {
        let lo = self.lower().max(other.lower());
        let hi = self.upper().min(other.upper());
        if lo > hi {
            None
        } else {
            Some(Ball::from_endpoints(&lo, &hi, self.prec.max(other.prec)))
        }
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: self.mid.neg(), rad: self.rad, prec: self.prec }
    }

    /// Ball of `|x|`.
    pub fn abs(&self) -> Ball {
        if !self.contains_zero() {
            if self.mid.is_negative() {
                self.neg()
            } else {
                self.clone()
            }
        } else {
            let hi = self.mag_upper().to_float();
            Ball::from_endpoints(&Float::zero(), &hi, self.prec)
        }
    }

    pub fn mul_2exp(&self, e: i64) -> Ball {
        Ball { mid: self.mid.mul_2exp(e), rad: self.rad.mul_2exp(e), prec: self.prec }
    }

    fn add_impl(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let (big, small) = if self.mid.top() >= other.mid.top() { (self, other) } else { (other, self) };
        // Operand entirely below the rounding unit of the other: fold it into the radius.
        if !small.mid.is_zero() && small.mid.top() < big.mid.top().saturating_sub(prec as i64 + 4) {
            let (mid, err) = round_mid(big.mid.clone(), prec);
            let rad = self.rad.add(&other.rad).add(&err).add(&Mag::from_float_upper(&small.mid));
            return Ball { mid, rad, prec };
        }
        let (mid, err) = round_mid(self.mid.add(&other.mid), prec);
        Ball { mid, rad: self.rad.add(&other.rad).add(&err), prec }
    }

    fn mul_impl(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let (mid, err) = round_mid(self.mid.mul(&other.mid), prec);
        let am = Mag::from_float_upper(&self.mid);
        let bm = Mag::from_float_upper(&other.mid);
        let rad = am.mul(&other.rad).add(&bm.mul(&self.rad)).add(&self.rad.mul(&other.rad)).add(&err);
        Ball { mid, rad, prec }
    }

    /// Division; fails when the divisor ball contains zero.
    pub fn div(&self, other: &Ball) -> Result<Ball> {
        if other.contains_zero() {
            return Err(Error::Domain("division by a ball containing zero".into()));
        }
        let prec = self.prec.max(other.prec);
        let (mid, err) = div_floats(&self.mid, &other.mid, prec);
        let rad = if self.rad.is_zero() && other.rad.is_zero() {
            err
        } else {
            // |a/b - ma/mb| <= (|ma| rb + |mb| ra) / (|mb| (|mb| - rb))
            let am = Mag::from_float_upper(&self.mid);
            let bm_hi = Mag::from_float_upper(&other.mid);
            let bm_lo = Mag::from_float_lower(&other.mid);
            let num = am.mul(&other.rad).add(&bm_hi.mul(&self.rad));
            let den = bm_lo.mul_lower(&bm_lo.sub_lower(&other.rad));
            if den.is_zero() {
                return Err(Error::Domain("division by a ball too close to zero".into()));
            }
            num.div(&den).add(&err)
        };
        Ok(Ball { mid, rad, prec })
    }

    pub fn recip(&self) -> Result<Ball> {
        Ball::one(self.prec).div(self)
    }

    pub fn mul_int(&self, k: i64) -> Ball {
        self * &Ball::from_i64(k, self.prec)
    }

    pub fn div_int(&self, k: i64) -> Ball {
        assert!(k != 0, "division by zero integer");
        self.div(&Ball::from_i64(k, self.prec)).expect("non-zero integer divisor")
    }

    pub fn div_bigint(&self, k: &BigInt) -> Ball {
        assert!(!k.is_zero(), "division by zero integer");
        self.div(&Ball::from_bigint(k, self.prec)).expect("non-zero integer divisor")
    }

    pub fn sqr(&self) -> Ball {
        if self.contains_zero() {
            // Avoid the symmetric product bound overshooting below zero.
            let m = self.mag_upper();
            let hi = m.mul(&m).to_float();
            return Ball::from_endpoints(&Float::zero(), &hi, self.prec);
        }
        self * self
    }

    pub fn pow_u(&self, mut k: u64) -> Ball {
        let mut base = self.clone();
        let mut acc = Ball::one(self.prec);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        acc
    }
}

/// Quotient of two floats rounded to `prec` bits plus an error bound.
fn div_floats(a: &Float, b: &Float, prec: u32) -> (Float, Mag) {
    if a.is_zero() {
        return (Float::zero(), Mag::zero());
    }
    let ab = a.bits() as i64;
    let bb = b.bits() as i64;
    let shift = (prec as i64 + 3 + bb - ab).max(0);
    let num = a.mantissa() << (shift as usize);
    let q = &num / b.mantissa();
    let r = &num - &q * b.mantissa();
    let exp = a.exponent() - b.exponent() - shift;
    let raw = Float::new(q, exp);
    let (mid, err) = round_mid(raw, prec);
    let err = if r.is_zero() { err } else { err.add(&Mag::pow2(exp)) };
    (mid, err)
}

impl<'b> Add<&'b Ball> for &Ball {
    type Output = Ball;
    fn add(self, rhs: &'b Ball) -> Ball {
        self.add_impl(rhs)
    }
}

impl<'b> Sub<&'b Ball> for &Ball {
    type Output = Ball;
    fn sub(self, rhs: &'b Ball) -> Ball {
        self.add_impl(&rhs.neg())
    }
}

impl<'b> Mul<&'b Ball> for &Ball {
    type Output = Ball;
    fn mul(self, rhs: &'b Ball) -> Ball {
        self.mul_impl(rhs)
    }
}

impl Add for Ball {
    type Output = Ball;
    fn add(self, rhs: Ball) -> Ball {
        self.add_impl(&rhs)
    }
}

impl Sub for Ball {
    type Output = Ball;
    fn sub(self, rhs: Ball) -> Ball {
        self.add_impl(&rhs.neg())
    }
}

impl Mul for Ball {
    type Output = Ball;
    fn mul(self, rhs: Ball) -> Ball {
        self.mul_impl(&rhs)
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball::neg(&self)
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball::neg(self)
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec as f64) / std::f64::consts::LOG2_10).min(40.0) as usize;
        let s = super::decimal::to_scientific(self, digits.max(6));
        write!(f, "[{s} +/- {:.3e}]", self.rad.to_f64())
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
