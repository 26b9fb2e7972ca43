//! Auxiliary special functions and exact integer utilities.

mod bernoulli;
mod ei;
mod integer;
mod lambert;
mod zeta;

pub use bernoulli::bernoulli;
pub use ei::{ei, ei_prec, ein_series};
pub use integer::{chebyshev_psi, factorial, lcm_power, lcm_upto};
pub use lambert::{lambert_w, lambert_w_prec};
pub use zeta::{euler_gamma, euler_gamma_prec, zeta_euler_maclaurin, zeta_even_closed_form, zeta_int, zeta_int_prec};
