use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of guard bits carried above the requested decimal precision.
pub const MIN_GUARD_BITS: u32 = 32;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Requested decimal digits plus the binary working precision used to reach them.
///
/// Contexts are plain values passed explicitly to every computation; there is no
/// process-wide precision setting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    working_bits: u32,
    target_digits: u32,
}

fn base_bits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32
}

impl PrecisionContext {
    /// Context for `target_digits` decimal digits with the default guard,
    /// `max(32, base/16)` bits on top of `ceil(digits * log2 10)`.
    pub fn new(target_digits: u32) -> Result<Self> {
        if target_digits == 0 {
            return Err(Error::InvalidArgument("target_digits must be positive".into()));
        }
        let base = base_bits(target_digits);
        let guard = MIN_GUARD_BITS.max(base / 16);
        Ok(PrecisionContext { working_bits: base + guard, target_digits })
    }

    /// Context with an explicit working precision, which must still leave the minimum guard.
    pub fn with_working_bits(target_digits: u32, working_bits: u32) -> Result<Self> {
        let ctx = PrecisionContext::new(target_digits)?;
        let min = base_bits(target_digits) + MIN_GUARD_BITS;
        if working_bits < min {
            return Err(Error::InvalidArgument(format!(
                "working_bits {working_bits} below the minimum {min} for {target_digits} digits"
            )));
        }
        Ok(PrecisionContext { working_bits, ..ctx })
    }

    pub fn working_bits(&self) -> u32 {
        self.working_bits
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    /// Same target with twice the working precision.
    pub fn escalate(&self) -> Self {
        PrecisionContext { working_bits: self.working_bits * 2, ..*self }
    }

    /// `10^-target_digits` expressed as a power of two exponent (rounded down).
    pub fn tolerance_exp(&self) -> i64 {
        -((self.target_digits as f64 * LOG2_10).ceil() as i64)
    }
}
