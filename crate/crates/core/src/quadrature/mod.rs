//! Tanh-sinh quadrature of the Gumbel moment integrals in the `u = e^{-x}` frame:
//!
//! - `I_n = int_0^1 (-ln u)^n e^{-u} du = eta(n)`
//! - `J_n = int_1^inf (ln u)^n e^{-u} du`, so `delta(n) = (-1)^(n+1) e J_n`
//! - `gamma(n) = I_n + (-1)^n J_n`
//!
//! `[1, U]` is split into dyadic pieces; pieces past the saddle `u* = n / W(n)` whose
//! contribution is provably negligible are bounded by `f(a) (b - a)` and skipped. The
//! discretization error is estimated as four times the last level difference, so results
//! are heuristic-certified.

mod tanh_sinh;

use std::f64::consts::{E, LN_2, LOG2_E};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::precision::{e_const, exp, log, Ball, Float, Mag, PrecisionContext};
use crate::special::lambert_w_prec;
use tanh_sinh::{integrate_piece, Piece};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegralKind {
    Eta,
    Gamma,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntegralSpec {
    pub kind: IntegralKind,
    pub n: u32,
    /// Always `true`: integrals are taken in the `u = e^{-x}` frame.
    pub transformed: bool,
}

impl IntegralSpec {
    pub fn new(kind: IntegralKind, n: u32) -> Self {
        IntegralSpec { kind, n, transformed: true }
    }
}

#[derive(Debug, Clone)]
pub struct QuadratureResult {
    pub value: Ball,
    pub nodes_used: usize,
    /// Truncation point `U` of `[1, inf)` (1 when no tail is involved).
    pub tail_cut: Ball,
    pub tail_bound: Ball,
    /// Level-difference error estimate included in the radius.
    pub discretization: Mag,
    /// The discretization term is an estimate, not a proof.
    pub heuristic: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub max_n: u32,
    pub max_level: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { max_n: 64, max_level: 11 }
    }
}

fn check_u(n: u32, u: &Ball) -> Result<()> {
    let lo = u.lower();
    let e2 = e_const(64).sqr();
    if lo < Float::from_i64((n as i64) * (n as i64)) || lo <= e2.upper() {
        return Err(Error::Domain(format!("tail cut must be at least max(e^2, n^2) for n = {n}")));
    }
    Ok(())
}

/// Majorant of `int_U^inf (ln u)^n e^{-u} du`: `e^{-U}` for `n = 0`, else `2 e^{-U/2}`
/// (valid because `(ln u)^n <= e^{u/2}` for `u >= max(e^2, n^2)`).
pub fn tail_bound(spec: &IntegralSpec, u: &Ball) -> Result<Ball> {
    check_u(spec.n, u)?;
    let prec = u.prec().max(64);
    let lo = Ball::exact(u.lower(), prec);
    let bound = if spec.n == 0 { exp(&-&lo) } else { exp(&-&lo.mul_2exp(-1)).mul_2exp(1) };
    Ok(Ball::exact(bound.upper(), prec))
}

/// Smallest integer `U >= max(e^2, n^2)` with `2 e^{-U/2} < 10^-(digits+5)`.
pub fn tail_cut(n: u32, digits: u32) -> u64 {
    let need = 2.0 * ((digits as f64 + 5.0) * std::f64::consts::LN_10 + LN_2);
    let floor = (E * E).max((n as f64) * (n as f64));
    need.max(floor).ceil() as u64 + 1
}

fn log2_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).log2()).sum()
}

/// Rough `log2 J_n` from the saddle point, used only to size the working precision.
fn log2_upper_moment(n: u32) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let mut w = nf.ln().max(0.5);
    for _ in 0..50 {
        w -= (w * w.exp() - nf) / (w.exp() * (w + 1.0));
    }
    let us = nf / w;
    let phi = nf * w.ln() - us;
    (phi * LOG2_E + 0.5 * (2.0 * std::f64::consts::PI * us).log2() + 4.0).max(0.0)
}

struct Moments {
    values: Vec<Ball>,
    discretization: Vec<Mag>,
    converged: Vec<bool>,
    nodes: usize,
    tail_cut: u64,
    tail: Mag,
}

fn tolerance(ctx: &PrecisionContext, pieces: usize) -> i64 {
    -(ctx.working_bits() as i64) - 4 - (pieces as f64).log2().ceil() as i64
}

/// `I_0, ..., I_{n_max}`.
fn unit_moments(n_max: u32, ctx: &PrecisionContext, cfg: &QuadratureConfig) -> Result<Moments> {
    let wp = ctx.working_bits() + log2_factorial(n_max).ceil() as u32 + 40;
    let tol = vec![tolerance(ctx, 1); n_max as usize + 1];
    let piece = Piece { a: Float::zero(), b: Float::one(), unit: true };
    let r = integrate_piece(&piece, n_max, wp, &tol, cfg.max_level)?;
    Ok(Moments {
        values: r.values,
        discretization: r.discretization,
        converged: r.converged,
        nodes: r.nodes,
        tail_cut: 1,
        tail: Mag::zero(),
    })
}

/// `J_0, ..., J_{n_max}`.
fn upper_moments(n_max: u32, ctx: &PrecisionContext, cfg: &QuadratureConfig) -> Result<Moments> {
    let wp = ctx.working_bits() + log2_upper_moment(n_max).ceil() as u32 + 40;
    let cut = tail_cut(n_max, ctx.target_digits());
    let mut bounds = vec![1u64];
    while *bounds.last().unwrap() < cut {
        bounds.push((bounds.last().unwrap() * 2).min(cut));
    }
    let pieces = bounds.len() - 1;
    let tol_exp = tolerance(ctx, pieces + 1);
    let tol = vec![tol_exp; n_max as usize + 1];
    let saddle = if n_max == 0 {
        0.0
    } else {
        let w = lambert_w_prec(&Ball::from_i64(n_max as i64, 64), 64)?.to_f64();
        n_max as f64 / w
    };

    let mut values = vec![Ball::zero(wp); n_max as usize + 1];
    let mut discretization = vec![Mag::zero(); n_max as usize + 1];
    let mut converged = vec![true; n_max as usize + 1];
    let mut nodes = 0;
    for win in bounds.windows(2) {
        let (a, b) = (win[0], win[1]);
        if (a as f64) >= saddle {
            if let Some(skip) = negligible_piece(a, b, n_max, tol_exp) {
                for (v, s) in values.iter_mut().zip(&skip) {
                    *v = v.add_error(*s);
                }
                continue;
            }
        }
        let piece = Piece { a: Float::from_i64(a as i64), b: Float::from_i64(b as i64), unit: false };
        let r = integrate_piece(&piece, n_max, wp, &tol, cfg.max_level)?;
        nodes += r.nodes;
        for (i, v) in values.iter_mut().enumerate() {
            *v = &*v + &r.values[i];
            discretization[i] = discretization[i].add(&r.discretization[i]);
            converged[i] &= r.converged[i];
        }
    }
    // n = 0 has the sharper tail e^{-U}; the family bound covers every n >= 1
    let u = Ball::from_i64(cut as i64, wp);
    let tail0 = tail_bound(&IntegralSpec::new(IntegralKind::Delta, 0), &u)?.mag_upper();
    let tail =
        if n_max == 0 { tail0 } else { tail_bound(&IntegralSpec::new(IntegralKind::Delta, n_max), &u)?.mag_upper() };
    for (i, v) in values.iter_mut().enumerate() {
        *v = v.add_error(if i == 0 { tail0 } else { tail });
    }
    Ok(Moments { values, discretization, converged, nodes, tail_cut: cut, tail })
}

/// `f_n(a) (b - a)` for every `n` when all are below `2^tol`; `f_n` is decreasing on `[a, b]`
/// because `a` is past every saddle.
fn negligible_piece(a: u64, b: u64, n_max: u32, tol: i64) -> Option<Vec<Mag>> {
    let p = 64;
    let ab = Ball::from_i64(a as i64, p);
    let la = log(&ab).ok()?;
    let mut term = &exp(&-&ab) * &Ball::from_i64((b - a) as i64, p);
    let mut out = Vec::with_capacity(n_max as usize + 1);
    for _ in 0..=n_max {
        let m = term.mag_upper();
        if !m.is_zero() && m.top() > tol {
            return None;
        }
        out.push(m);
        term = &term * &la;
    }
    Some(out)
}

fn assemble(
    kind: IntegralKind,
    n: usize,
    unit: Option<&Moments>,
    upper: Option<&Moments>,
    wp: u32,
) -> QuadratureResult {
    let sign = |k: usize| if k.is_multiple_of(2) { 1 } else { -1 };
    let (value, discretization) = match kind {
        IntegralKind::Eta => {
            let m = unit.expect("unit moments");
            (m.values[n].clone(), m.discretization[n])
        }
        IntegralKind::Delta => {
            let m = upper.expect("upper moments");
            let v = (&e_const(m.values[n].prec() + 16) * &m.values[n]).mul_int(-sign(n));
            (v, m.discretization[n])
        }
        IntegralKind::Gamma => {
            let (i, j) = (unit.expect("unit moments"), upper.expect("upper moments"));
            (&i.values[n] + &j.values[n].mul_int(sign(n)), i.discretization[n].add(&j.discretization[n]))
        }
    };
    let nodes = unit.map_or(0, |m| m.nodes) + upper.map_or(0, |m| m.nodes);
    let (cut, tail) = upper.map_or((1, Mag::zero()), |m| (m.tail_cut, m.tail));
    QuadratureResult {
        value,
        nodes_used: nodes,
        tail_cut: Ball::from_i64(cut as i64, wp),
        tail_bound: Ball::exact(tail.to_float(), wp),
        discretization,
        heuristic: true,
    }
}

/// Every `n` in `0..=n_max` for one kind, sharing node evaluations across `n`.
pub fn integrate_all(
    kind: IntegralKind,
    n_max: u32,
    ctx: &PrecisionContext,
    cfg: &QuadratureConfig,
) -> Result<Vec<QuadratureResult>> {
    if n_max > cfg.max_n {
        return Err(Error::InvalidArgument(format!("n = {n_max} exceeds the configured maximum {}", cfg.max_n)));
    }
    let unit =
        matches!(kind, IntegralKind::Eta | IntegralKind::Gamma).then(|| unit_moments(n_max, ctx, cfg)).transpose()?;
    let upper = matches!(kind, IntegralKind::Delta | IntegralKind::Gamma)
        .then(|| upper_moments(n_max, ctx, cfg))
        .transpose()?;
    let wp = ctx.working_bits() + 16;
    let results: Vec<QuadratureResult> =
        (0..=n_max as usize).map(|n| assemble(kind, n, unit.as_ref(), upper.as_ref(), wp)).collect();
    let ok = |m: &Option<Moments>, n: usize| m.as_ref().is_none_or(|m| m.converged[n]);
    if let Some(n) = (0..=n_max as usize).rev().find(|&n| !ok(&unit, n) || !ok(&upper, n)) {
        let r = &results[n];
        return Err(Error::BudgetExceeded {
            nodes: r.nodes_used,
            radius: r.value.rad().to_f64(),
            best: Box::new(r.value.clone()),
        });
    }
    Ok(results)
}

/// One integral with a custom configuration.
pub fn integrate_with(spec: &IntegralSpec, ctx: &PrecisionContext, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    let mut all = integrate_all(spec.kind, spec.n, ctx, cfg)?;
    Ok(all.swap_remove(spec.n as usize))
}

/// One integral with the default configuration (`n <= 64`).
pub fn integrate(spec: &IntegralSpec, ctx: &PrecisionContext) -> Result<QuadratureResult> {
    integrate_with(spec, ctx, &QuadratureConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::to_decimal_truncated;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    #[test]
    fn eta_zero_is_one_minus_inverse_e() {
        let c = ctx(30);
        let r = integrate(&IntegralSpec::new(IntegralKind::Eta, 0), &c).unwrap();
        let p = c.working_bits() + 16;
        let exact = &Ball::one(p) - &e_const(p).recip().unwrap();
        assert!(r.value.overlaps(&exact));
        assert!(r.value.rad().to_f64() < 1e-30);
        assert_eq!(to_decimal_truncated(&r.value, 10).0, "0.6321205588");
    }

    #[test]
    fn gamma_zero_is_one() {
        let c = ctx(30);
        let r = integrate(&IntegralSpec::new(IntegralKind::Gamma, 0), &c).unwrap();
        assert!(r.value.contains(&Float::one()));
        assert!(r.value.rad().to_f64() < 1e-30);
    }

    #[test]
    fn delta_two() {
        let c = ctx(20);
        let r = integrate(&IntegralSpec::new(IntegralKind::Delta, 2), &c).unwrap();
        assert_eq!(to_decimal_truncated(&r.value, 10).0, "-0.5319307700");
        assert!(r.heuristic);
        assert!(r.nodes_used > 0);
    }

    #[test]
    fn tail_bound_examples() {
        let s0 = IntegralSpec::new(IntegralKind::Delta, 0);
        let b = tail_bound(&s0, &Ball::from_i64(100, 64)).unwrap();
        assert!(b.upper() <= exp(&Ball::from_i64(-100, 64)).upper().add(&Float::pow2(-200)));
        let s5 = IntegralSpec::new(IntegralKind::Delta, 5);
        // (ln 200)^5 < e^100
        assert!(200f64.ln().powi(5) < 100f64.exp());
        let b200 = tail_bound(&s5, &Ball::from_i64(200, 64)).unwrap();
        assert!(b200.to_f64() <= 2.0 * (-100f64).exp() * 1.000001);
        let b300 = tail_bound(&s5, &Ball::from_i64(300, 64)).unwrap();
        assert!(b300.upper() < b200.lower());
        assert!(tail_bound(&s5, &Ball::from_i64(20, 64)).is_err());
        assert!(tail_bound(&s0, &Ball::from_i64(5, 64)).is_err());
    }

    #[test]
    fn over_limit_is_rejected() {
        let c = ctx(10);
        assert!(integrate(&IntegralSpec::new(IntegralKind::Eta, 65), &c).is_err());
    }

    #[test]
    fn budget_exhaustion_reports_best() {
        let c = ctx(40);
        let cfg = QuadratureConfig { max_n: 64, max_level: 1 };
        match integrate_with(&IntegralSpec::new(IntegralKind::Eta, 3), &c, &cfg) {
            Err(Error::BudgetExceeded { best, nodes, .. }) => {
                assert!(nodes > 0);
                assert!((best.to_f64() - 5.6584954080).abs() < 0.05, "{}", best.to_f64());
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
