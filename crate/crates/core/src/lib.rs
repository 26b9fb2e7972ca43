//! Certified computation of the generalized Eta, Euler-Mascheroni and Euler-Gompertz
//! constants.
//!
//! The moments of a standard Gumbel variable split as `eta(n) = gamma(n) + delta(n)/e`.
//! This crate computes each sequence by independent routes (alternating series, certified
//! quadrature, the cumulant recurrence) in ball arithmetic, and checks the exact coefficient
//! identities behind the E-functions `F_n(t) = sum a_k t^k / k!`.

pub mod asymptotics;
pub mod constants;
pub mod efunction;
pub mod error;
pub mod precision;
pub mod quadrature;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use precision::{Ball, PrecisionContext};
