//! The three constant sequences by independent routes.
//!
//! Canonical values: `eta(n)` from its alternating series, `gamma(n)` from the cumulant
//! recurrence, `delta(n)` from quadrature. The identity routes
//! `gamma = eta - delta/e` and `delta = e (eta - gamma)` exist only for cross-checking, so
//! the Hardy identity is never assumed where it is tested.

mod routes;

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::precision::{e_const, to_decimal_truncated, Ball, PrecisionContext};
use crate::special::zeta_int_prec;

pub use routes::{
    cumulants, delta_star, delta_star_identity, eta_value, gamma_closed_form, gamma_recurrence, moments_from_cumulants,
    CumulantSeq,
};

/// Escalations allowed per table before rows are reported uncertified.
pub const MAX_ESCALATIONS: u32 = 3;
/// Largest `n` served by default.
pub const DEFAULT_N_CAP: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Eta,
    Gamma,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Series,
    Quadrature,
    Recurrence,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaRoute {
    /// Served by the identity route: no series for `delta(n)` avoids `gamma(n)`.
    Series,
    Quadrature,
    Identity,
}

#[derive(Debug, Clone)]
pub struct RouteValue {
    pub quantity: Quantity,
    pub route: Route,
    pub value: Ball,
}

/// Deliberate faults for exercising the cross-checks.
#[derive(Debug, Clone, Copy, Default)]
pub struct Faults {
    /// Negate `zeta(s)` inside the recurrence.
    pub flip_zeta_sign: Option<u32>,
    /// Add `10^-k` to `zeta(s)` inside the recurrence, as `(s, k)`.
    pub zeta_offset: Option<(u32, u32)>,
    /// Shift every quadrature `delta(n)` by `10^-k`.
    pub delta_offset_exp: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecordChecks {
    pub eta_routes: bool,
    pub gamma_routes: bool,
    pub delta_routes: bool,
    pub hardy: bool,
}

impl RecordChecks {
    pub fn all(&self) -> bool {
        self.eta_routes && self.gamma_routes && self.delta_routes && self.hardy
    }
}

#[derive(Debug, Clone)]
pub struct ConstantRecord {
    pub n: u32,
    pub eta: Ball,
    pub gamma_n: Ball,
    pub delta_n: Ball,
    pub route_values: Vec<RouteValue>,
    /// `eta - gamma - delta/e` from the canonical (independent) routes.
    pub hardy_residual: Ball,
    pub checks: RecordChecks,
    /// All checks pass and every canonical value is stable at the requested digits.
    pub certified: bool,
    pub escalations: u32,
    pub working_bits: u32,
}

impl ConstantRecord {
    pub fn route(&self, q: Quantity, r: Route) -> Option<&Ball> {
        self.route_values.iter().find(|v| v.quantity == q && v.route == r).map(|v| &v.value)
    }

    /// Truncated decimal renderings of `(eta, gamma, delta)` and whether each is stable.
    pub fn render(&self, digits: u32) -> [(String, bool); 3] {
        [display_value(&self.eta, digits), display_value(&self.gamma_n, digits), display_value(&self.delta_n, digits)]
    }

    fn stable(&self, digits: u32) -> bool {
        self.render(digits).iter().all(|(_, ok)| *ok)
    }
}

/// Truncated decimal rendering; exact integers print as `k.0`.
pub fn display_value(x: &Ball, digits: u32) -> (String, bool) {
    if x.is_exact() && x.mid().is_integer() {
        return (format!("{}.0", x.mid().floor_int()), true);
    }
    to_decimal_truncated(x, digits)
}

#[derive(Debug, Clone)]
pub struct Table {
    pub records: Vec<ConstantRecord>,
    pub target_digits: u32,
    pub working_bits: u32,
    pub escalations: u32,
}

impl Table {
    pub fn all_certified(&self) -> bool {
        self.records.iter().all(|r| r.certified)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossValidationRow {
    pub n: u32,
    pub eta_ok: bool,
    pub gamma_ok: bool,
    pub delta_ok: bool,
    pub hardy_ok: bool,
    pub hardy_width: f64,
    /// Largest midpoint gap between two routes of the same quantity.
    pub max_route_gap: f64,
}

impl CrossValidationRow {
    pub fn passed(&self) -> bool {
        self.eta_ok && self.gamma_ok && self.delta_ok && self.hardy_ok
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossValidationReport {
    pub n_min: u32,
    pub n_max: u32,
    pub rows: Vec<CrossValidationRow>,
    pub worst_residual: f64,
    pub passed: bool,
}

/// Computation engine; carries optional fault injection.
#[derive(Debug, Clone, Default)]
pub struct Engine {
    faults: Faults,
}

fn ten_pow_neg(k: u32) -> num_rational::BigRational {
    num_rational::BigRational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), k as usize))
}

fn pairwise_overlap(balls: &[&Ball]) -> bool {
    balls.iter().enumerate().all(|(i, a)| balls[i + 1..].iter().all(|b| a.overlaps(b)))
}

fn max_gap(balls: &[&Ball]) -> f64 {
    let mut g: f64 = 0.0;
    for (i, a) in balls.iter().enumerate() {
        for b in &balls[i + 1..] {
            g = g.max((a.to_f64() - b.to_f64()).abs());
        }
    }
    g
}

impl Engine {
    pub fn new() -> Self {
        Engine::default()
    }

    pub fn with_faults(faults: Faults) -> Self {
        Engine { faults }
    }

    pub(crate) fn zeta(&self, s: u32, prec: u32) -> Result<Ball> {
        let mut z = zeta_int_prec(s, prec)?;
        if self.faults.flip_zeta_sign == Some(s) {
            z = -z;
        }
        if let Some((fs, k)) = self.faults.zeta_offset {
            if fs == s {
                z = &z + &Ball::from_rational(&ten_pow_neg(k), prec);
            }
        }
        Ok(z)
    }

    pub fn gamma_recurrence(&self, n_max: u32, ctx: &PrecisionContext) -> Result<Vec<Ball>> {
        routes::gamma_recurrence_with(self, n_max, ctx)
    }

    pub fn delta_quadrature(&self, n_max: u32, ctx: &PrecisionContext) -> Result<Vec<Ball>> {
        let mut v = routes::delta_quadrature_all(n_max, ctx)?;
        if let Some(k) = self.faults.delta_offset_exp {
            let q = ten_pow_neg(k);
            for d in v.iter_mut() {
                *d = &*d + &Ball::from_rational(&q, d.prec());
            }
        }
        Ok(v)
    }

    /// Records for `0..=n_max`, all routes, at one precision.
    pub fn records(&self, n_max: u32, digits: u32, ctx: &PrecisionContext) -> Result<Vec<ConstantRecord>> {
        let ((eta_series, eta_quad), (gamma_rec, delta_quad)) = rayon::join(
            || {
                let s: Vec<Ball> = (0..=n_max).into_par_iter().map(|n| eta_value(n, ctx)).collect();
                (s, routes::eta_quadrature_all(n_max, ctx))
            },
            || (self.gamma_recurrence(n_max, ctx), self.delta_quadrature(n_max, ctx)),
        );
        let (eta_quad, gamma_rec, delta_quad) = (eta_quad?, gamma_rec?, delta_quad?);
        let wp = ctx.working_bits() + routes::log2_factorial(n_max) + 32;
        let e = e_const(wp);
        (0..=n_max as usize)
            .map(|n| {
                let eta = eta_series[n].clone();
                let (gamma_n, delta_n) = if n == 0 {
                    (Ball::one(wp), Ball::from_i64(-1, wp))
                } else {
                    (gamma_rec[n].clone(), delta_quad[n].clone())
                };
                let delta_over_e = delta_quad[n].div(&e)?;
                let gamma_id = &eta - &delta_over_e;
                let delta_id = &e * &(&eta - &gamma_rec[n]);
                let hardy_residual = &(&eta - &gamma_rec[n]) - &delta_over_e;
                let route_values = vec![
                    RouteValue { quantity: Quantity::Eta, route: Route::Series, value: eta.clone() },
                    RouteValue { quantity: Quantity::Eta, route: Route::Quadrature, value: eta_quad[n].clone() },
                    RouteValue { quantity: Quantity::Gamma, route: Route::Recurrence, value: gamma_rec[n].clone() },
                    RouteValue { quantity: Quantity::Gamma, route: Route::Identity, value: gamma_id.clone() },
                    RouteValue { quantity: Quantity::Delta, route: Route::Quadrature, value: delta_quad[n].clone() },
                    RouteValue { quantity: Quantity::Delta, route: Route::Identity, value: delta_id.clone() },
                ];
                let checks = RecordChecks {
                    eta_routes: pairwise_overlap(&[&eta, &eta_quad[n]]),
                    gamma_routes: pairwise_overlap(&[&gamma_n, &gamma_rec[n], &gamma_id]),
                    delta_routes: pairwise_overlap(&[&delta_n, &delta_quad[n], &delta_id]),
                    hardy: hardy_residual.contains_zero(),
                };
                let mut rec = ConstantRecord {
                    n: n as u32,
                    eta,
                    gamma_n,
                    delta_n,
                    route_values,
                    hardy_residual,
                    checks,
                    certified: false,
                    escalations: 0,
                    working_bits: ctx.working_bits(),
                };
                rec.certified = rec.checks.all() && rec.stable(digits);
                Ok(rec)
            })
            .collect()
    }

    /// Records for `0..=n_max` certified to `digits`, escalating precision for failing rows.
    pub fn table(&self, n_max: u32, digits: u32, ctx: &PrecisionContext) -> Result<Table> {
        if n_max > DEFAULT_N_CAP {
            return Err(Error::InvalidArgument(format!("n_max {n_max} exceeds the cap {DEFAULT_N_CAP}")));
        }
        let mut records = self.records(n_max, digits, ctx)?;
        let mut cur = *ctx;
        let mut escalations = 0;
        while escalations < MAX_ESCALATIONS {
            let Some(worst) = records.iter().filter(|r| !r.certified).map(|r| r.n).max() else { break };
            escalations += 1;
            cur = cur.escalate();
            let fresh = self.records(worst, digits, &cur)?;
            for mut r in fresh {
                let slot = &mut records[r.n as usize];
                if !slot.certified {
                    r.escalations = escalations;
                    *slot = r;
                }
            }
        }
        let working_bits = records.iter().map(|r| r.working_bits).max().unwrap_or(ctx.working_bits());
        Ok(Table { records, target_digits: digits, working_bits, escalations })
    }

    pub fn cross_validate(&self, range: RangeInclusive<u32>, ctx: &PrecisionContext) -> Result<CrossValidationReport> {
        let (lo, hi) = (*range.start(), *range.end());
        let records = self.records(hi, ctx.target_digits(), ctx)?;
        let rows: Vec<CrossValidationRow> = records[lo as usize..]
            .iter()
            .map(|r| {
                let gap = [Quantity::Eta, Quantity::Gamma, Quantity::Delta]
                    .iter()
                    .map(|&q| {
                        let balls: Vec<&Ball> =
                            r.route_values.iter().filter(|v| v.quantity == q).map(|v| &v.value).collect();
                        max_gap(&balls)
                    })
                    .fold(0.0, f64::max);
                CrossValidationRow {
                    n: r.n,
                    eta_ok: r.checks.eta_routes,
                    gamma_ok: r.checks.gamma_routes,
                    delta_ok: r.checks.delta_routes,
                    hardy_ok: r.checks.hardy,
                    hardy_width: r.hardy_residual.width().to_f64(),
                    max_route_gap: gap,
                }
            })
            .collect();
        let worst_residual =
            records[lo as usize..].iter().map(|r| r.hardy_residual.mag_upper().to_f64()).fold(0.0, f64::max);
        let passed = rows.iter().all(CrossValidationRow::passed);
        Ok(CrossValidationReport { n_min: lo, n_max: hi, rows, worst_residual, passed })
    }
}

/// `delta(n)` by the chosen route; `delta(0) = -1` exactly except on the quadrature route.
pub fn delta_value(n: u32, ctx: &PrecisionContext, route: DeltaRoute) -> Result<Ball> {
    match route {
        DeltaRoute::Quadrature => Ok(routes::delta_quadrature_all(n, ctx)?.swap_remove(n as usize)),
        DeltaRoute::Series | DeltaRoute::Identity => {
            if n == 0 {
                return Ok(Ball::from_i64(-1, ctx.working_bits()));
            }
            let wp = ctx.working_bits() + routes::log2_factorial(n) + 32;
            let g = gamma_recurrence(n, ctx)?.swap_remove(n as usize);
            Ok(&e_const(wp) * &(&eta_value(n, ctx) - &g))
        }
    }
}

/// `eta(n) - gamma(n) - delta(n)/e` with series, recurrence and quadrature routes.
pub fn hardy_residual(n: u32, ctx: &PrecisionContext) -> Result<Ball> {
    Ok(Engine::new().records(n, ctx.target_digits(), ctx)?.swap_remove(n as usize).hardy_residual)
}

/// Table for `0..=n_max` at `digits`, with up to three precision escalations.
pub fn table(n_max: u32, digits: u32, ctx: &PrecisionContext) -> Result<Table> {
    Engine::new().table(n_max, digits, ctx)
}

pub fn cross_validate(range: RangeInclusive<u32>, ctx: &PrecisionContext) -> Result<CrossValidationReport> {
    Engine::new().cross_validate(range, ctx)
}
