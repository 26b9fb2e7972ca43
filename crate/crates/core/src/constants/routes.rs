use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;

use super::Engine;
use crate::error::Result;
use crate::precision::{e_const, Ball, PrecisionContext};
use crate::quadrature::{integrate_all, IntegralKind, QuadratureConfig};
use crate::special::{ei_prec, euler_gamma_prec, factorial};

pub(crate) fn log2_factorial(n: u32) -> u32 {
    (2..=n).map(|k| (k as f64).log2()).sum::<f64>().ceil() as u32
}

/// `eta(n) = n! sum_{k>=1} (-1)^(k+1) / (k^n k!)`; the terms decrease from `k = 1`, so the
/// remainder is bounded by the first omitted term.
pub fn eta_value(n: u32, ctx: &PrecisionContext) -> Ball {
    let target = -(ctx.working_bits() as i64) - 8;
    let wp = ctx.working_bits() + log2_factorial(n) + 24;
    let nfact = Ball::from_biguint(&factorial(n as u64), wp);
    let mut inv_kfact = Ball::one(wp); // 1/k!
    let mut sum = Ball::zero(wp);
    let mut k: i64 = 1;
    loop {
        inv_kfact = inv_kfact.div_int(k);
        let kn = num_traits::pow(BigInt::from(k), n as usize);
        let term = (&nfact * &inv_kfact).div_bigint(&kn);
        sum = if k % 2 == 1 { &sum + &term } else { &sum - &term };
        let next_k = k + 1;
        let next = (&nfact * &inv_kfact.div_int(next_k))
            .div_bigint(&num_traits::pow(BigInt::from(next_k), n as usize))
            .mag_upper();
        if next.top() < target {
            return sum.add_error(next);
        }
        k = next_k;
    }
}

/// `gamma(0..=n_max)` from `gamma(n+1) = gamma gamma(n) + sum_{j<n} n!/j! zeta(n+1-j) gamma(j)`,
/// seeded with `gamma(0) = 1` and `gamma(1) = gamma`.
pub(crate) fn gamma_recurrence_with(engine: &Engine, n_max: u32, ctx: &PrecisionContext) -> Result<Vec<Ball>> {
    let wp = ctx.working_bits() + log2_factorial(n_max) + 2 * (32 - n_max.leading_zeros()) + 24;
    let g = euler_gamma_prec(wp);
    let zetas: Vec<Ball> = (2..=n_max + 1).into_par_iter().map(|s| engine.zeta(s, wp)).collect::<Result<_>>()?;
    let zeta = |s: u32| &zetas[s as usize - 2];
    let mut out = vec![Ball::one(wp)];
    for n in 0..n_max as usize {
        let mut next = &g * &out[n];
        // n!/j! built downward from j = n-1
        let mut ratio = BigUint::from(1u32);
        for j in (0..n).rev() {
            ratio *= (j + 1) as u64;
            let term = zeta((n + 1 - j) as u32) * &out[j];
            next = &next + &(&Ball::from_biguint(&ratio, wp) * &term);
        }
        out.push(next);
    }
    Ok(out)
}

/// `gamma(0..=n_max)` through the cumulant recurrence.
pub fn gamma_recurrence(n_max: u32, ctx: &PrecisionContext) -> Result<Vec<Ball>> {
    gamma_recurrence_with(&Engine::new(), n_max, ctx)
}

/// Cumulants of the standard Gumbel law: `kappa_1 = gamma`, `kappa_j = (j-1)! zeta(j)`.
#[derive(Debug, Clone)]
pub struct CumulantSeq {
    pub kappa: Vec<Ball>,
}

impl CumulantSeq {
    /// `kappa_j` (1-based).
    pub fn get(&self, j: usize) -> &Ball {
        &self.kappa[j - 1]
    }
}

pub fn cumulants(j_max: u32, ctx: &PrecisionContext) -> Result<CumulantSeq> {
    let wp = ctx.working_bits() + log2_factorial(j_max) + 16;
    let mut kappa = vec![euler_gamma_prec(wp)];
    for j in 2..=j_max {
        let z = crate::special::zeta_int_prec(j, wp)?;
        kappa.push(&z * &Ball::from_biguint(&factorial(j as u64 - 1), wp));
    }
    Ok(CumulantSeq { kappa })
}

/// Moments from cumulants: `m_{n+1} = sum_{j=0}^{n} C(n, j) kappa_{j+1} m_{n-j}`.
pub fn moments_from_cumulants(c: &CumulantSeq) -> Vec<Ball> {
    let prec = c.kappa[0].prec();
    let mut m = vec![Ball::one(prec)];
    for n in 0..c.kappa.len() {
        let mut binom = BigUint::from(1u32);
        let mut acc = Ball::zero(prec);
        for j in 0..=n {
            if j > 0 {
                binom = binom * (n + 1 - j) as u64 / j as u64;
            }
            acc = &acc + &(&(&c.kappa[j] * &m[n - j]) * &Ball::from_biguint(&binom, prec));
        }
        m.push(acc);
    }
    m
}

/// The displayed closed forms of `gamma(2)`, `gamma(3)`, `gamma(4)` in `gamma` and `zeta`.
pub fn gamma_closed_form(n: u32, ctx: &PrecisionContext) -> Option<Ball> {
    let wp = ctx.working_bits() + 16;
    let g = euler_gamma_prec(wp);
    let z = |s| crate::special::zeta_int_prec(s, wp).expect("s >= 2");
    let v = match n {
        2 => &g.sqr() + &z(2),
        3 => &(&g.pow_u(3) + &(&g * &z(2)).mul_int(3)) + &z(3).mul_int(2),
        4 => {
            let c4 = Ball::from_rational(&BigRational::new(27.into(), 2.into()), wp);
            let a = &g.pow_u(4) + &(&z(2) * &g.sqr()).mul_int(6);
            let b = &(&z(3) * &g).mul_int(8) + &(&c4 * &z(4));
            &a + &b
        }
        _ => return None,
    };
    Some(v)
}

/// `delta(0..=n_max)` by quadrature of `(-1)^(n+1) e int_1^inf (ln u)^n e^{-u} du`.
pub(crate) fn delta_quadrature_all(n_max: u32, ctx: &PrecisionContext) -> Result<Vec<Ball>> {
    let cfg = QuadratureConfig { max_n: n_max.max(QuadratureConfig::default().max_n), ..Default::default() };
    Ok(integrate_all(IntegralKind::Delta, n_max, ctx, &cfg)?.into_iter().map(|r| r.value).collect())
}

/// `eta(0..=n_max)` by quadrature of `int_0^1 (-ln u)^n e^{-u} du`.
pub(crate) fn eta_quadrature_all(n_max: u32, ctx: &PrecisionContext) -> Result<Vec<Ball>> {
    let cfg = QuadratureConfig { max_n: n_max.max(QuadratureConfig::default().max_n), ..Default::default() };
    Ok(integrate_all(IntegralKind::Eta, n_max, ctx, &cfg)?.into_iter().map(|r| r.value).collect())
}

/// `delta* = -e Ei(1)`.
pub fn delta_star(ctx: &PrecisionContext) -> Result<Ball> {
    let wp = ctx.working_bits() + 16;
    let ei1 = ei_prec(&Ball::one(wp), wp)?;
    Ok(-(&e_const(wp) * &ei1))
}

/// `-(gamma + delta*/e)`, which equals `F_1(-1) = sum 1/(k k!)`.
pub fn delta_star_identity(ctx: &PrecisionContext) -> Result<Ball> {
    let wp = ctx.working_bits() + 16;
    let ds = delta_star(ctx)?;
    Ok(-(&euler_gamma_prec(wp) + &ds.div(&e_const(wp))?))
}
