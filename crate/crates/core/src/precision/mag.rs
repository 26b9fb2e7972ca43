//! Low-precision non-negative magnitudes used for ball radii.
//!
//! Every operation is rounded in a fixed direction (up, unless the method name says
//! `lower`), so a `Mag` computed from upper bounds is itself an upper bound.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::float::{Float, Round};

const MAG_BITS: u32 = 30;

/// `man * 2^exp` with `man < 2^30`; zero has `man == 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mag {
    man: u64,
    exp: i64,
}

fn bitlen(v: u128) -> u32 {
    128 - v.leading_zeros()
}

impl Mag {
    pub const fn zero() -> Self {
        Mag { man: 0, exp: 0 }
    }

    pub fn one() -> Self {
        Mag { man: 1, exp: 0 }
    }

    pub fn pow2(e: i64) -> Self {
        Mag { man: 1, exp: e }
    }

    fn from_parts(man: u128, exp: i64, up: bool) -> Self {
        if man == 0 {
            return Mag::zero();
        }
        let len = bitlen(man);
        if len <= MAG_BITS {
            return Mag { man: man as u64, exp };
        }
        let shift = len - MAG_BITS;
        let mut m = man >> shift;
        if up && (m << shift) != man {
            m += 1;
        }
        Mag { man: m as u64, exp: exp + shift as i64 }
    }

    pub fn from_u64(v: u64) -> Self {
        Mag::from_parts(v as u128, 0, true)
    }

    /// Upper bound for `|x|`.
    pub fn from_float_upper(x: &Float) -> Self {
        Mag::from_float(x, Round::Ceil)
    }

    /// Lower bound for `|x|`.
    pub fn from_float_lower(x: &Float) -> Self {
        Mag::from_float(x, Round::Floor)
    }

    fn from_float(x: &Float, mode: Round) -> Self {
        if x.is_zero() {
            return Mag::zero();
        }
        let (r, _) = x.abs().round(MAG_BITS, mode);
        let man = r.mantissa().to_u64().expect("rounded mantissa fits");
        Mag { man, exp: r.exponent() }
    }

    /// Upper bound for a non-negative finite `f64`, padded by a relative 2^-40.
    pub fn from_f64_upper(v: f64) -> Self {
        assert!(v >= 0.0 && v.is_finite(), "invalid magnitude {v}");
        let f = Float::from_f64(v * (1.0 + 2f64.powi(-40)));
        Mag::from_float_upper(&f)
    }

    pub fn to_float(&self) -> Float {
        Float::new(BigInt::from(self.man), self.exp)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float().to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    /// Exponent of the leading bit plus one, as in [`Float::top`].
    pub fn top(&self) -> i64 {
        if self.man == 0 {
            i64::MIN
        } else {
            self.exp + bitlen(self.man as u128) as i64
        }
    }

    fn add_dir(&self, other: &Mag, up: bool) -> Mag {
        if self.man == 0 {
            return *other;
        }
        if other.man == 0 {
            return *self;
        }
        let (hi, lo) = if self.top() >= other.top() { (self, other) } else { (other, self) };
        // Align to the larger operand with 64 extra bits of room.
        let base = hi.top() - 64 - MAG_BITS as i64;
        let place = |m: &Mag, up: bool| -> u128 {
            let d = m.exp - base;
            if d >= 0 {
                (m.man as u128) << d
            } else if d > -100 {
                let s = (-d) as u32;
                let v = (m.man as u128) >> s;
                if up && (v << s) != m.man as u128 {
                    v + 1
                } else {
                    v
                }
            } else if up {
                1
            } else {
                0
            }
        };
        let sum = place(hi, up) + place(lo, up);
        Mag::from_parts(sum, base, up)
    }

    pub fn add(&self, other: &Mag) -> Mag {
        self.add_dir(other, true)
    }

    pub fn add_lower(&self, other: &Mag) -> Mag {
        self.add_dir(other, false)
    }

    pub fn mul(&self, other: &Mag) -> Mag {
        if self.man == 0 || other.man == 0 {
            return Mag::zero();
        }
        Mag::from_parts(self.man as u128 * other.man as u128, self.exp + other.exp, true)
    }

    pub fn mul_lower(&self, other: &Mag) -> Mag {
        if self.man == 0 || other.man == 0 {
            return Mag::zero();
        }
        Mag::from_parts(self.man as u128 * other.man as u128, self.exp + other.exp, false)
    }

    /// Upper bound for `self / other`; `other` must be non-zero.
    pub fn div(&self, other: &Mag) -> Mag {
        assert!(other.man != 0, "Mag division by zero");
        if self.man == 0 {
            return Mag::zero();
        }
        let num = (self.man as u128) << 64;
        let q = num / other.man as u128;
        let q = if q * other.man as u128 != num { q + 1 } else { q };
        Mag::from_parts(q, self.exp - other.exp - 64, true)
    }

    /// Lower bound for `self / other`.
    pub fn div_lower(&self, other: &Mag) -> Mag {
        assert!(other.man != 0, "Mag division by zero");
        if self.man == 0 {
            return Mag::zero();
        }
        let num = (self.man as u128) << 64;
        Mag::from_parts(num / other.man as u128, self.exp - other.exp - 64, false)
    }

    /// Lower bound for `max(self - other, 0)`.
    pub fn sub_lower(&self, other: &Mag) -> Mag {
        if other.man == 0 {
            return *self;
        }
        if *self <= *other {
            return Mag::zero();
        }
        let diff = self.to_float().sub(&other.to_float());
        Mag::from_float_lower(&diff)
    }

    pub fn mul_2exp(&self, e: i64) -> Mag {
        if self.man == 0 {
            *self
        } else {
            Mag { man: self.man, exp: self.exp + e }
        }
    }

    pub fn max(self, other: Mag) -> Mag {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Upper bound for `e^self - 1`.
    pub fn expm1_upper(&self) -> Mag {
        if self.man == 0 {
            return Mag::zero();
        }
        if *self <= Mag::one() {
            // e^r - 1 <= r + r^2 for 0 <= r <= 1
            self.add(&self.mul(self))
        } else {
            // e^r <= 2^ceil(r * log2(e) + 1)
            let r = self.to_f64();
            let e = (r * std::f64::consts::LOG2_E).ceil() + 1.0;
            Mag::pow2(e.min(4.0e18) as i64)
        }
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.man == 0, other.man == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.to_float().cmp(&other.to_float()),
        }
    }
}

impl fmt::Debug for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mag({:e})", self.to_f64())
    }
}
