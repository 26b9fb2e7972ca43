use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::coeffs::{to_taylor, EFunctionSeries};
use crate::special::{factorial, lcm_upto};

/// `D~ = t d/dt + 1` on power-basis coefficients: `c_k -> (k+1) c_k`.
pub fn apply_dtilde(c: &[BigRational]) -> Vec<BigRational> {
    c.iter().enumerate().map(|(k, ck)| ck * BigRational::from_integer(BigInt::from(k + 1))).collect()
}

/// `D = d/dt + 1` on power-basis coefficients: `c_k -> (k+1) c_{k+1} + c_k`.
///
/// The top coefficient needs `c_K`, so the output is one shorter than the input.
pub fn apply_d(c: &[BigRational]) -> Vec<BigRational> {
    (0..c.len().saturating_sub(1)).map(|k| &c[k + 1] * BigRational::from_integer(BigInt::from(k + 1)) + &c[k]).collect()
}

/// Coefficients `(-1)^k / k!` of `e^{-t}`.
pub fn exp_neg_coeffs(len: usize) -> Vec<BigRational> {
    let mut fact = BigInt::one();
    (0..len)
        .map(|k| {
            if k > 0 {
                fact *= k;
            }
            let q = BigRational::new(BigInt::one(), fact.clone());
            if k % 2 == 1 {
                -q
            } else {
                q
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `(k+1) a_k^(n) = n a_k^(n-1)`.
    LoweringLaw,
    /// `(k+1) c_k + c_{k-1} = [k = 0]` for `F_0`.
    F0Equation,
    /// `D~^(n+1) F_n = n! e^{-t}`.
    DTildePower,
    /// `D D~^(n+1) F_n = 0`.
    Annihilator,
    /// `1 - t F_0 = e^{-t}`.
    ExpIdentity,
    /// `t H_n' = n H_{n-1}` with `H_n = t F_n`.
    HDerivative,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub identity: Identity,
    pub passed: bool,
    /// First coefficient index where the identity fails.
    pub first_failure: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub n: u32,
    pub terms: usize,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `(n, k)` of the earliest failure across all checks.
    pub fn first_failure(&self) -> Option<(u32, usize)> {
        self.checks.iter().filter_map(|c| c.first_failure).min().map(|k| (self.n, k))
    }
}

fn compare(identity: Identity, lhs: &[BigRational], rhs: &[BigRational]) -> IdentityCheck {
    let first_failure = lhs.iter().zip(rhs).position(|(a, b)| a != b);
    IdentityCheck { identity, passed: first_failure.is_none(), first_failure }
}

/// Exact identity checks on the first `terms` coefficients of `F_n`.
pub fn verify_ode_identities(n: u32, terms: usize) -> IdentityReport {
    let a = EFunctionSeries::new(n).prefix(terms);
    let prev = (n > 0).then(|| EFunctionSeries::new(n - 1).prefix(terms));
    let f0 = if n == 0 { a.clone() } else { EFunctionSeries::new(0).prefix(terms) };
    verify_ode_identities_with(n, &a, prev.as_deref(), &f0)
}

/// Same checks on caller-supplied coefficient sequences (`a_k` convention).
///
/// `a` is the candidate for `F_n`, `prev` for `F_{n-1}` (required when `n >= 1`), `f0` for `F_0`.
pub fn verify_ode_identities_with(
    n: u32,
    a: &[BigRational],
    prev: Option<&[BigRational]>,
    f0: &[BigRational],
) -> IdentityReport {
    let terms = a.len();
    let c = to_taylor(a);
    let c0 = to_taylor(f0);
    let e = exp_neg_coeffs(terms);
    let mut checks = Vec::new();

    if let Some(p) = prev.filter(|_| n >= 1) {
        let nq = BigRational::from_integer(BigInt::from(n));
        let lhs: Vec<_> =
            a.iter().enumerate().map(|(k, ak)| ak * BigRational::from_integer(BigInt::from(k + 1))).collect();
        let rhs: Vec<_> = p.iter().map(|x| x * &nq).collect();
        checks.push(compare(Identity::LoweringLaw, &lhs, &rhs));

        // H_n = t F_n has coefficients c_{k-1}; t H_n' has k c_{k-1}.
        let cp = to_taylor(p);
        let lhs: Vec<_> = (1..terms).map(|k| &c[k - 1] * BigRational::from_integer(BigInt::from(k))).collect();
        let rhs: Vec<_> = (1..terms).map(|k| &cp[k - 1] * &nq).collect();
        checks.push(compare(Identity::HDerivative, &lhs, &rhs));
    }

    if n == 0 {
        let lhs: Vec<_> = (0..terms)
            .map(|k| {
                let mut v = &c[k] * BigRational::from_integer(BigInt::from(k + 1));
                if k > 0 {
                    v += &c[k - 1];
                }
                v
            })
            .collect();
        let mut rhs = vec![BigRational::zero(); terms];
        if terms > 0 {
            rhs[0] = BigRational::one();
        }
        checks.push(compare(Identity::F0Equation, &lhs, &rhs));
    }

    let mut powered = c.clone();
    for _ in 0..=n {
        powered = apply_dtilde(&powered);
    }
    let nf = BigRational::from_integer(BigInt::from(factorial(n as u64)));
    let target: Vec<_> = e.iter().map(|x| x * &nf).collect();
    checks.push(compare(Identity::DTildePower, &powered, &target));
    let annihilated = apply_d(&powered);
    checks.push(compare(Identity::Annihilator, &annihilated, &vec![BigRational::zero(); annihilated.len()]));

    let one_minus_t_f0: Vec<_> = (0..c0.len()).map(|k| if k == 0 { BigRational::one() } else { -&c0[k - 1] }).collect();
    checks.push(compare(Identity::ExpIdentity, &one_minus_t_f0, &e[..c0.len()]));

    IdentityReport { n, terms, checks }
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthRow {
    pub k: u64,
    pub ln_g: f64,
    pub reference: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DenominatorReport {
    pub n: u32,
    pub max_k: u64,
    pub passed: bool,
    pub first_failure: Option<u64>,
    pub growth: Vec<GrowthRow>,
}

fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Checks that `g_k = lcm(1..k+1)^(n+1)` clears the denominators of `a_0, ..., a_k` for
/// every `k <= max_k`.
///
/// `g_{k-1} | g_k`, so once `g_{k-1} a_j` is integral for `j < k` it stays integral; each step
/// checks the chain divisibility and the new coefficient `a_k`.
pub fn denominator_check(n: u32, max_k: u64) -> DenominatorReport {
    let series = EFunctionSeries::new(n);
    let mut growth = Vec::with_capacity(max_k as usize + 1);
    let mut first_failure = None;
    let mut lcm = BigUint::one();
    let mut g_prev = BigUint::one();
    for k in 0..=max_k {
        lcm = lcm.lcm(&BigUint::from(k + 1));
        let g = num_traits::pow(lcm.clone(), n as usize + 1);
        let ak = series.coeff(k as usize);
        let integral = (BigRational::from_integer(BigInt::from(g.clone())) * &ak).is_integer();
        if first_failure.is_none() && (!integral || !g.is_multiple_of(&g_prev)) {
            first_failure = Some(k);
        }
        growth.push(GrowthRow { k, ln_g: ln_biguint(&g), reference: (n as u64 + 1) * (k + 1) });
        g_prev = g;
    }
    debug_assert_eq!(lcm, lcm_upto(max_k + 1));
    DenominatorReport { n, max_k, passed: first_failure.is_none(), first_failure, growth }
}

/// Checks `g * a_j` integral for each supplied coefficient, returning the first failing index.
pub fn clears_denominators(g: &BigUint, a: &[BigRational]) -> Option<usize> {
    let gq = BigRational::from_integer(BigInt::from(g.clone()));
    a.iter().position(|x| !(x * &gq).is_integer())
}
