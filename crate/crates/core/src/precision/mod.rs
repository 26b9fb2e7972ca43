//! Ball (midpoint-radius) arbitrary-precision real arithmetic.

mod ball;
mod context;
mod decimal;
mod elementary;
mod float;
mod mag;

pub use ball::Ball;
pub use context::{PrecisionContext, MIN_GUARD_BITS};
pub use decimal::{
    enclose_decimal, parse_decimal, to_decimal, to_decimal_mode, to_decimal_truncated, to_scientific, DecimalMode,
};
pub use elementary::{e_const, exp, ln2, log, pi, pow_int, sqrt};
pub use float::{Float, Round};
pub use mag::Mag;
