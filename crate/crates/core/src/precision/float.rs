//! Exact binary floating-point values `m * 2^e` with explicit rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for [`Float::round`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Nearest,
    Floor,
    Ceil,
}

/// A dyadic rational `man * 2^exp`.
///
/// The representation is canonical: the mantissa is odd, or zero with `exp == 0`.
/// Arithmetic on `Float` is exact; precision loss only happens through [`Float::round`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Float {
    man: BigInt,
    exp: i64,
}

impl Float {
    pub fn zero() -> Self {
        Float { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Float { man: BigInt::one(), exp: 0 }
    }

    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut f = Float { man, exp };
        f.normalize();
        f
    }

    pub fn from_i64(v: i64) -> Self {
        Float::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Float::new(v, 0)
    }

    pub fn from_biguint(v: BigUint) -> Self {
        Float::new(BigInt::from(v), 0)
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite f64");
        if v == 0.0 {
            return Float::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), raw_exp - 1075) };
        Float::new(BigInt::from(man) * sign, exp)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Float { man: BigInt::one(), exp: e }
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.man.trailing_zeros() {
            if tz > 0 {
                self.man >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0 || self.man.is_zero()
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Exponent of the leading bit plus one: `2^(top-1) <= |x| < 2^top`. Zero maps to `i64::MIN`.
    pub fn top(&self) -> i64 {
        if self.man.is_zero() {
            i64::MIN
        } else {
            self.exp + self.man.bits() as i64
        }
    }

    pub fn abs(&self) -> Float {
        Float { man: self.man.abs(), exp: self.exp }
    }

    pub fn neg(&self) -> Float {
        Float { man: -&self.man, exp: self.exp }
    }

    pub fn mul_2exp(&self, e: i64) -> Float {
        if self.is_zero() {
            return Float::zero();
        }
        Float { man: self.man.clone(), exp: self.exp + e }
    }

    pub fn add(&self, other: &Float) -> Float {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << ((self.exp - e) as usize);
        let b = &other.man << ((other.exp - e) as usize);
        Float::new(a + b, e)
    }

    pub fn sub(&self, other: &Float) -> Float {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Float) -> Float {
        if self.is_zero() || other.is_zero() {
            return Float::zero();
        }
        Float { man: &self.man * &other.man, exp: self.exp + other.exp }
    }

    /// Rounds to `prec` significant bits; returns the rounded value and whether it is exact.
    pub fn round(&self, prec: u32, mode: Round) -> (Float, bool) {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return (self.clone(), true);
        }
        let shift = bits - prec as u64;
        let neg = self.man.is_negative();
        let mag = self.man.magnitude();
        let mut q: BigUint = mag >> shift;
        // Canonical form keeps the mantissa odd, so a positive shift always discards a one bit.
        let half_bit = mag.bit(shift - 1);
        let below_half = (mag.trailing_zeros().unwrap_or(0)) < shift - 1;
        let away = match mode {
            Round::Nearest => half_bit && (below_half || q.bit(0)),
            Round::Floor => neg,
            Round::Ceil => !neg,
        };
        if away {
            q += 1u32;
        }
        let man = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, q);
        (Float::new(man, self.exp + shift as i64), false)
    }

    /// Rounds to nearest and returns the magnitude of the rounding error as an exponent bound:
    /// `|rounded - self| <= 2^err_exp` (or `None` when exact).
    pub fn round_nearest_err(&self, prec: u32) -> (Float, Option<i64>) {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return (self.clone(), None);
        }
        let shift = (bits - prec as u64) as i64;
        let (r, _) = self.round(prec, Round::Nearest);
        (r, Some(self.exp + shift - 1))
    }

    pub fn cmp_abs(&self, other: &Float) -> Ordering {
        self.abs().cmp(&other.abs())
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let keep = bits.min(60);
        let shifted: BigInt = &self.man >> ((bits - keep) as usize);
        let m = shifted.to_f64().unwrap_or(0.0);
        let e = self.exp + bits - keep;
        if e > 2000 {
            return if m < 0.0 { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        if e < -2200 {
            return 0.0;
        }
        let half = (e / 2) as i32;
        m * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }

    /// `floor(self)` as an integer.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << (self.exp as usize)
        } else {
            let shift = (-self.exp) as u64;
            if self.man.bits() + 1 < shift {
                return if self.man.is_negative() { -BigInt::one() } else { BigInt::zero() };
            }
            // BigInt >> rounds toward negative infinity.
            &self.man >> (shift as usize)
        }
    }
}

impl PartialOrd for Float {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Float {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let ta = self.top();
        let tb = other.top();
        if ta != tb {
            let by_mag = ta.cmp(&tb);
            return if sa > 0 { by_mag } else { by_mag.reverse() };
        }
        self.sub(other).signum().cmp(&0)
    }
}

impl fmt::Debug for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.man, self.exp)
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}
