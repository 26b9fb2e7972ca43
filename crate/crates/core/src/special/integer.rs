//! Exact integer utilities: factorials, `lcm(1..m)` and its powers.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::error::Result;
use crate::precision::{log, Ball, PrecisionContext};

/// `n!`.
pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `lcm(1, 2, ..., m)`; `lcm()` of the empty range is 1.
pub fn lcm_upto(m: u64) -> BigUint {
    (2..=m).fold(BigUint::one(), |acc, k| acc.lcm(&BigUint::from(k)))
}

/// `g_k = lcm(1, ..., k+1)^(n+1)`, a common denominator of the first `k+1` coefficients of `F_n`.
pub fn lcm_power(k: u64, n: u64) -> BigUint {
    num_traits::pow(lcm_upto(k + 1), (n + 1) as usize)
}

/// Chebyshev's second function `psi(m) = ln lcm(1..m)`, evaluated from the exact lcm.
pub fn chebyshev_psi(m: u64, ctx: &PrecisionContext) -> Result<Ball> {
    let l = lcm_upto(m.max(1));
    let prec = ctx.working_bits() + 16;
    Ok(log(&Ball::from_biguint(&l, prec))?.with_prec(ctx.working_bits()))
}
