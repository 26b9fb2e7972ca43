//! Large-`n` behaviour: explicit brackets for `eta(n)` and `gamma(n)`, and the Laplace
//! (saddle-point) estimate of `|delta(n)|`.

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{eta_value, Engine};
use crate::error::{Error, Result};
use crate::precision::{e_const, exp, pi, pow_int, sqrt, Ball, PrecisionContext};
use crate::special::{factorial, lambert_w_prec};

fn wp_for(n: u32, ctx: &PrecisionContext) -> u32 {
    ctx.working_bits() + (2..=n).map(|k| (k as f64).log2()).sum::<f64>().ceil() as u32 + 32
}

/// `n! [1 - 2^-(n+1) -/+ (e - 5/2) 3^-n]`.
pub fn eta_bracket(n: u32, ctx: &PrecisionContext) -> Result<(Ball, Ball)> {
    if n == 0 {
        return Err(Error::Domain("eta bracket needs n >= 1".into()));
    }
    let wp = wp_for(n, ctx);
    let nf = Ball::from_biguint(&factorial(n as u64), wp);
    let centre = &Ball::one(wp) - &Ball::one(wp).mul_2exp(-(n as i64) - 1);
    let half_width = (&e_const(wp) - &Ball::from_i64(5, wp).mul_2exp(-1))
        .div(&Ball::from_biguint(&num_traits::pow(3u32.into(), n as usize), wp))?;
    Ok((&nf * &(&centre - &half_width), &nf * &(&centre + &half_width)))
}

/// The eta bracket widened by `|delta(n)| / e`, using a certified `delta(n)`.
pub fn gamma_bracket_with(n: u32, delta: &Ball, ctx: &PrecisionContext) -> Result<(Ball, Ball)> {
    let (lo, hi) = eta_bracket(n, ctx)?;
    let wp = wp_for(n, ctx);
    let shift = delta.abs().div(&e_const(wp))?;
    Ok((&lo - &shift, &hi + &shift))
}

/// The gamma bracket with `delta(n)` from quadrature.
pub fn gamma_bracket(n: u32, ctx: &PrecisionContext) -> Result<(Ball, Ball)> {
    let delta = Engine::new().delta_quadrature(n, ctx)?.swap_remove(n as usize);
    gamma_bracket_with(n, &delta, ctx)
}

/// `x` lies inside `[lo, hi]` for every point of all three balls.
pub fn contained(x: &Ball, lo: &Ball, hi: &Ball) -> bool {
    lo.upper() <= x.lower() && x.upper() <= hi.lower()
}

/// Saddle point `u* = n / W(n)` of `n ln ln u - u`.
pub fn saddle_point(n: u32, ctx: &PrecisionContext) -> Result<Ball> {
    let wp = ctx.working_bits() + 16;
    let nb = Ball::from_i64(n as i64, wp);
    nb.div(&lambert_w_prec(&nb, wp)?)
}

/// Estimate `e W^n exp(-n/W) sqrt(2 pi n / (W + 1))` of `|delta(n)|`, `W = W(n)`.
pub fn laplace_delta(n: u32, ctx: &PrecisionContext) -> Result<Ball> {
    if n < 3 {
        return Err(Error::Domain(format!("Laplace estimate needs n >= 3, got {n}")));
    }
    let wp = ctx.working_bits() + 32;
    let nb = Ball::from_i64(n as i64, wp);
    let w = lambert_w_prec(&nb, wp)?;
    let peak = &pow_int(&w, n as i64)? * &exp(&-&nb.div(&w)?);
    let curvature = sqrt(&(&pi(wp).mul_2exp(1) * &nb).div(&(&w + &Ball::one(wp)))?)?;
    Ok(&(&e_const(wp) * &peak) * &curvature)
}

#[derive(Debug, Clone)]
pub struct AsymptoticEstimate {
    pub n: u32,
    pub eta: Ball,
    pub gamma_n: Ball,
    pub delta_n: Ball,
    pub eta_bracket: Option<(Ball, Ball)>,
    pub gamma_bracket: Option<(Ball, Ball)>,
    /// Laplace estimate of `|delta(n)|`; an estimate, not an enclosure.
    pub laplace_value: Option<Ball>,
    /// `|laplace - |delta|| / |delta|`.
    pub relative_error: Option<Ball>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainmentSummary {
    pub n: u32,
    pub eta_contained: Option<bool>,
    pub gamma_contained: Option<bool>,
    pub relative_error: Option<f64>,
}

impl AsymptoticEstimate {
    pub fn eta_contained(&self) -> Option<bool> {
        self.eta_bracket.as_ref().map(|(lo, hi)| contained(&self.eta, lo, hi))
    }

    pub fn gamma_contained(&self) -> Option<bool> {
        self.gamma_bracket.as_ref().map(|(lo, hi)| contained(&self.gamma_n, lo, hi))
    }

    pub fn summary(&self) -> ContainmentSummary {
        ContainmentSummary {
            n: self.n,
            eta_contained: self.eta_contained(),
            gamma_contained: self.gamma_contained(),
            relative_error: self.relative_error.as_ref().map(Ball::to_f64),
        }
    }
}

/// Brackets, estimates and certified values for each `n` in `n_set` (in the given order).
pub fn asymptotic_report(n_set: &[u32], ctx: &PrecisionContext) -> Result<Vec<AsymptoticEstimate>> {
    let Some(&n_max) = n_set.iter().max() else { return Ok(Vec::new()) };
    let engine = Engine::new();
    let (gammas, deltas) = rayon::join(|| engine.gamma_recurrence(n_max, ctx), || engine.delta_quadrature(n_max, ctx));
    let (gammas, deltas) = (gammas?, deltas?);
    n_set
        .par_iter()
        .map(|&n| {
            let i = n as usize;
            let eta = eta_value(n, ctx);
            let delta_n = if n == 0 { Ball::from_i64(-1, ctx.working_bits()) } else { deltas[i].clone() };
            let gamma_n = if n == 0 { Ball::one(ctx.working_bits()) } else { gammas[i].clone() };
            let (eta_b, gamma_b) = if n >= 1 {
                (Some(eta_bracket(n, ctx)?), Some(gamma_bracket_with(n, &delta_n, ctx)?))
            } else {
                (None, None)
            };
            let (laplace_value, relative_error) = if n >= 3 {
                let l = laplace_delta(n, ctx)?;
                let d = delta_n.abs();
                let rel = (&l - &d).abs().div(&d)?;
                (Some(l), Some(rel))
            } else {
                (None, None)
            };
            Ok(AsymptoticEstimate {
                n,
                eta,
                gamma_n,
                delta_n,
                eta_bracket: eta_b,
                gamma_bracket: gamma_b,
                laplace_value,
                relative_error,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::enclose_decimal;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(20).unwrap()
    }

    #[test]
    fn eta_bracket_examples() {
        let c = ctx();
        let (lo, hi) = eta_bracket(1, &c).unwrap();
        assert!((lo.to_f64() - 0.6772).abs() < 1e-4 && (hi.to_f64() - 0.8228).abs() < 1e-4);
        assert!(contained(&enclose_decimal("0.7965995992", &c).unwrap(), &lo, &hi));
        let (lo, hi) = eta_bracket(5, &c).unwrap();
        assert!(contained(&enclose_decimal("118.2027216118", &c).unwrap(), &lo, &hi));
        // width / n! = 2 (e - 5/2) / 3^n
        let w = |n: u32| {
            let (lo, hi) = eta_bracket(n, &c).unwrap();
            (hi.to_f64() - lo.to_f64()) / (1..=n).map(f64::from).product::<f64>()
        };
        assert!((w(4) / w(5) - 3.0).abs() < 1e-9);
        assert!(eta_bracket(0, &c).is_err());
    }

    #[test]
    fn gamma_bracket_needs_the_delta_correction() {
        let c = ctx();
        for (n, v) in [(5, "117.8394082683"), (10, "3627042.4127568947")] {
            let (lo, hi) = gamma_bracket(n, &c).unwrap();
            assert!(contained(&enclose_decimal(v, &c).unwrap(), &lo, &hi), "n = {n}");
        }
        let g1 = enclose_decimal("0.5772156649", &c).unwrap();
        let (lo, hi) = gamma_bracket(1, &c).unwrap();
        assert!(contained(&g1, &lo, &hi));
        let (lo, hi) = eta_bracket(1, &c).unwrap();
        assert!(!contained(&g1, &lo, &hi));
    }

    #[test]
    fn laplace_and_saddle() {
        let c = ctx();
        assert!(laplace_delta(2, &c).is_err());
        let l15 = laplace_delta(15, &c).unwrap().to_f64();
        assert!((l15 / 313.9164765016 - 1.0).abs() < 0.05);
        let u = saddle_point(15, &c).unwrap();
        let wp = c.working_bits() + 16;
        let resid = &(&u * &crate::precision::log(&u).unwrap()) - &Ball::from_i64(15, wp);
        assert!(resid.contains_zero());
        assert!(resid.rad().to_f64() < 1e-15);
    }

    #[test]
    fn report() {
        let c = ctx();
        assert!(asymptotic_report(&[], &c).unwrap().is_empty());
        let r = asymptotic_report(&[5, 10, 15], &c).unwrap();
        for e in &r {
            assert_eq!(e.eta_contained(), Some(true));
            assert_eq!(e.gamma_contained(), Some(true));
        }
        let rel: Vec<f64> = asymptotic_report(&[10, 20, 40], &c)
            .unwrap()
            .iter()
            .map(|e| e.relative_error.as_ref().unwrap().to_f64())
            .collect();
        assert!(rel.windows(2).all(|w| w[1] < w[0]), "{rel:?}");
    }
}
