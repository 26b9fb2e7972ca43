//! The E-functions `F_n(t) = sum_k a_k t^k / k!` with `a_k = (-1)^k n! / (k+1)^(n+1)`.
//!
//! `F_n(1)` is the `n`-th generalized Eta constant. Coefficients are exact rationals; the
//! differential identities are checked coefficientwise with zero tolerance.

mod coeffs;
mod eval;
mod identities;

pub use coeffs::{coeff_a, to_taylor, EFunctionSeries};
pub use eval::{eval_f, eval_f_derivative, eval_f_truncated, eval_series, SeriesTail, TailMethod, TruncatedSeries};
pub use identities::{
    apply_d, apply_dtilde, clears_denominators, denominator_check, exp_neg_coeffs, verify_ode_identities,
    verify_ode_identities_with, DenominatorReport, GrowthRow, Identity, IdentityCheck, IdentityReport,
};
