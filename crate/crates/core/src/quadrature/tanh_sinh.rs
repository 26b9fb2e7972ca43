//! Tanh-sinh rule for the moment family `f_n(u) = L(u)^n e^{-u}`, `n = 0..=n_max`, on one
//! interval. `L(u) = -ln u` on `[0, 1]` and `ln u` elsewhere. Each node evaluates `L` and
//! `e^{-u}` once and feeds every `n`.

use std::f64::consts::{LOG2_E, PI};

use rayon::prelude::*;

use crate::error::Result;
use crate::precision::{exp, log, pi, Ball, Float, Mag};

pub(crate) struct PieceResult {
    /// One enclosure per `n`; radius includes the level-difference estimate.
    pub values: Vec<Ball>,
    pub discretization: Vec<Mag>,
    /// Whether each `n` met its tolerance before the level limit.
    pub converged: Vec<bool>,
    pub nodes: usize,
}

pub(crate) struct Piece {
    pub a: Float,
    pub b: Float,
    /// `[0, 1]` with the logarithmic endpoint at 0.
    pub unit: bool,
}

const MIN_LEVEL: u32 = 3;

/// Largest `t` worth sampling: beyond it every weighted node is below `2^-(wp+8)`.
fn t_max(piece: &Piece, n_max: u32, wp: u32) -> f64 {
    let a = piece.a.to_f64();
    let b = piece.b.to_f64();
    let width = b - a;
    let n = n_max as f64;
    let log2_f = |y: f64| -> f64 {
        if n_max == 0 {
            return 0.0;
        }
        if piece.unit {
            n * (2.0 * y + 1.0).log2()
        } else {
            n * b.ln().max(a.ln()).max(1e-300).log2() - a * LOG2_E
        }
    };
    let mut t: f64 = 0.5;
    loop {
        let y = 0.5 * PI * t.sinh();
        let lg = (width * PI * t.cosh()).log2() - 2.0 * y * LOG2_E + log2_f(y);
        if lg < -(wp as f64) - 8.0 {
            return t;
        }
        t += 1.0 / 16.0;
    }
}

/// Weighted integrand values at `+t` and `-t` (one node when `t = 0`), summed per `n`.
fn node_pair(piece: &Piece, t: &Float, n_max: u32, wp: u32, pi_b: &Ball) -> Result<Vec<Ball>> {
    let tb = Ball::exact(t.clone(), wp);
    let et = exp(&tb);
    let et_inv = et.recip()?;
    let cosh = (&et + &et_inv).mul_2exp(-1);
    let sinh = (&et - &et_inv).mul_2exp(-1);
    let y = (pi_b * &sinh).mul_2exp(-1);
    let e2y = exp(&y.mul_2exp(1));
    let one = Ball::one(wp);
    let denom = &one + &e2y;
    let q = denom.recip()?;
    let width = Ball::exact(piece.b.sub(&piece.a), wp);
    // (b - a) * pi * cosh t * q (1 - q), with 1 - q = e^{2y} q
    let weight = &(&(&width * pi_b) * &cosh) * &(&e2y * &q.sqr());

    let a = Ball::exact(piece.a.clone(), wp);
    let b = Ball::exact(piece.b.clone(), wp);
    let offset = &width * &q;
    let mut points: Vec<(Ball, Ball)> = Vec::with_capacity(2);
    if piece.unit {
        // u = q and u = 1 - q; -ln q = ln(1 + e^{2y}), -ln(1 - q) = ln(1 + e^{2y}) - 2y
        let ln_denom = log(&denom)?;
        points.push((offset.clone(), ln_denom.clone()));
        if !t.is_zero() {
            let u_r = &b - &offset;
            points.push((u_r, &ln_denom - &y.mul_2exp(1)));
        }
    } else {
        let u_l = &a + &offset;
        points.push((u_l.clone(), log(&u_l)?));
        if !t.is_zero() {
            let u_r = &b - &offset;
            let l = log(&u_r)?;
            points.push((u_r, l));
        }
    }

    let mut out = vec![Ball::zero(wp); n_max as usize + 1];
    for (u, l) in points {
        let mut term = &weight * &exp(&-&u);
        for slot in out.iter_mut() {
            *slot = &*slot + &term;
            term = &term * &l;
        }
    }
    Ok(out)
}

fn add_into(acc: &mut [Ball], xs: &[Ball]) {
    for (a, x) in acc.iter_mut().zip(xs) {
        *a = &*a + x;
    }
}

/// Sum of node contributions for `t = j h`, `j` in `indices`, in a fixed order.
fn level_sum(piece: &Piece, indices: &[u64], level: u32, n_max: u32, wp: u32, pi_b: &Ball) -> Result<Vec<Ball>> {
    let contribs: Vec<Vec<Ball>> = indices
        .par_iter()
        .map(|&j| node_pair(piece, &Float::from_i64(j as i64).mul_2exp(-(level as i64)), n_max, wp, pi_b))
        .collect::<Result<_>>()?;
    let mut acc = vec![Ball::zero(wp); n_max as usize + 1];
    for c in &contribs {
        add_into(&mut acc, c);
    }
    Ok(acc)
}

/// Integrates `f_0, ..., f_{n_max}` over the piece, halving the step until every `n` has
/// `4 |S_l - S_{l-1}| <= 2^tol_exp[n]`.
pub(crate) fn integrate_piece(
    piece: &Piece,
    n_max: u32,
    wp: u32,
    tol_exp: &[i64],
    max_level: u32,
) -> Result<PieceResult> {
    let pi_b = pi(wp);
    let tm = t_max(piece, n_max, wp);
    // the neglected nodes beyond t_max, both sides
    let cutoff = Mag::pow2(-(wp as i64) - 5);
    let mut nodes = 0usize;

    let j_max = tm.ceil() as u64;
    let idx: Vec<u64> = (0..=j_max).collect();
    nodes += 2 * idx.len() - 1;
    let mut sum = level_sum(piece, &idx, 0, n_max, wp, &pi_b)?;
    let mut prev: Option<Vec<Ball>> = None;
    let mut level = 0u32;
    loop {
        if let Some(p) = &prev {
            let errs: Vec<Mag> =
                sum.iter().zip(p).map(|(s, q)| (s - q).mag_upper().mul(&Mag::from_u64(4)).add(&cutoff)).collect();
            let done = level >= MIN_LEVEL && errs.iter().zip(tol_exp).all(|(e, &t)| e.is_zero() || e.top() <= t);
            if done || level >= max_level {
                let converged = errs.iter().zip(tol_exp).map(|(e, &t)| e.is_zero() || e.top() <= t).collect();
                let values = sum.iter().zip(&errs).map(|(s, e)| s.add_error(*e)).collect();
                return Ok(PieceResult { values, discretization: errs, converged, nodes });
            }
        }
        level += 1;
        let j_max = (tm * (1u64 << level) as f64).ceil() as u64;
        let idx: Vec<u64> = (1..=j_max).step_by(2).collect();
        nodes += 2 * idx.len();
        let fresh = level_sum(piece, &idx, level, n_max, wp, &pi_b)?;
        // S_l = S_{l-1} / 2 + h_l * (new nodes)
        let next: Vec<Ball> =
            sum.iter().zip(&fresh).map(|(s, f)| &s.mul_2exp(-1) + &f.mul_2exp(-(level as i64))).collect();
        prev = Some(std::mem::replace(&mut sum, next));
    }
}
