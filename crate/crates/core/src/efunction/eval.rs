use num_bigint::BigInt;
use serde::Serialize;

use crate::precision::{Ball, Mag, PrecisionContext};
use crate::special::factorial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailMethod {
    AlternatingNextTerm,
    GeometricMajorant,
}

/// Upper bound on the absolute value of the omitted terms.
#[derive(Debug, Clone, Copy)]
pub struct SeriesTail {
    pub bound: Mag,
    pub method: TailMethod,
}

/// A partial sum `sum_{k<terms} a_{k+shift} t^k / k!` and its tail.
#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    pub n: u32,
    pub shift: u32,
    pub terms: usize,
    pub t: Ball,
    pub partial: Ball,
    pub tail: SeriesTail,
}

impl TruncatedSeries {
    /// Ball containing the full series value.
    pub fn value(&self) -> Ball {
        self.partial.add_error(self.tail.bound)
    }
}

fn log2_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).log2()).sum()
}

/// `sum_k a_{k+shift} t^k / k!`, i.e. the `shift`-th derivative of `F_n`.
///
/// Terms are summed until the first omitted one drops below the target tolerance and the
/// term ratio (at most `|t|/(k+2)`) is below 1. For `t >= 0` the terms alternate and the
/// remainder is bounded by the first omitted term; otherwise by a geometric majorant with
/// ratio at most 1/2.
pub fn eval_series(n: u32, shift: u32, t: &Ball, ctx: &PrecisionContext) -> TruncatedSeries {
    let tm = t.mag_upper().to_f64();
    let target = -(ctx.working_bits() as i64) - 8;
    let wp = ctx.working_bits() + log2_factorial(n).ceil() as u32 + (1.45 * tm).ceil() as u32 + 24;
    let nfact = Ball::from_biguint(&factorial(n as u64), wp);
    let nfact_mag = nfact.mag_upper();
    let neg_t = -t.with_prec(wp);
    let alternating = !t.lower().is_negative();
    let denom = |idx: u64| num_traits::pow(BigInt::from(idx + 1), n as usize + 1);
    let sign = if shift % 2 == 1 { -1 } else { 1 };

    let mut p = Ball::one(wp); // (-t)^k / k!
    let mut sum = Ball::zero(wp);
    let mut k: u64 = 0;
    loop {
        let idx = k + shift as u64;
        let term = (&p * &nfact).div_bigint(&denom(idx)).mul_int(sign);
        sum = &sum + &term;
        p = (&p * &neg_t).div_int(k as i64 + 1);
        let next =
            nfact_mag.mul(&p.mag_upper()).div(&Mag::from_float_lower(&Ball::from_bigint(&denom(idx + 1), 64).lower()));
        let ratio_bound = (k + 2) as f64;
        let small = next.is_zero() || next.top() < target;
        if small && alternating && ratio_bound > tm {
            return finish(n, shift, k, t, sum, next, TailMethod::AlternatingNextTerm);
        }
        if small && ratio_bound >= 2.0 * tm {
            let bound = next.mul(&Mag::from_u64(2));
            return finish(n, shift, k, t, sum, bound, TailMethod::GeometricMajorant);
        }
        k += 1;
    }
}

fn finish(n: u32, shift: u32, last: u64, t: &Ball, partial: Ball, bound: Mag, method: TailMethod) -> TruncatedSeries {
    TruncatedSeries { n, shift, terms: last as usize + 1, t: t.clone(), partial, tail: SeriesTail { bound, method } }
}

/// `F_n(t)` as a truncated series with its tail.
pub fn eval_f_truncated(n: u32, t: &Ball, ctx: &PrecisionContext) -> TruncatedSeries {
    eval_series(n, 0, t, ctx)
}

/// Ball containing `F_n(t)`.
pub fn eval_f(n: u32, t: &Ball, ctx: &PrecisionContext) -> Ball {
    eval_series(n, 0, t, ctx).value()
}

/// Ball containing `F_n'(t) = sum a_{k+1} t^k / k!`.
pub fn eval_f_derivative(n: u32, t: &Ball, ctx: &PrecisionContext) -> Ball {
    eval_series(n, 1, t, ctx).value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{e_const, exp, to_decimal_truncated, Float};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40).unwrap()
    }

    #[test]
    fn value_at_zero_is_factorial() {
        let c = ctx();
        for n in 0..=6u32 {
            let v = eval_f(n, &Ball::zero(c.working_bits()), &c);
            assert!(v.contains(&Float::from_biguint(factorial(n as u64))));
        }
    }

    #[test]
    fn f1_at_one_and_minus_one() {
        let c = ctx();
        let p = c.working_bits();
        let v = eval_f(1, &Ball::one(p), &c);
        assert_eq!(to_decimal_truncated(&v, 10).0, "0.7965995992");
        // sum 1/(k k!) with the factorial tail 2/((K+1)(K+1)!)
        let mut s = 0.0f64;
        let mut f = 1.0f64;
        for k in 1..=20 {
            f *= k as f64;
            s += 1.0 / (k as f64 * f);
        }
        let w = eval_f(1, &Ball::from_i64(-1, p), &c);
        assert!((w.to_f64() - s).abs() < 1e-15);
        assert_eq!(to_decimal_truncated(&w, 10).0, "1.3179021514");
    }

    #[test]
    fn f0_closed_form() {
        // F_0(t) = (1 - e^{-t}) / t
        let c = ctx();
        let p = c.working_bits();
        for t in [-3i64, -1, 1, 2, 4] {
            let tb = Ball::from_i64(t, p);
            let closed = (&Ball::one(p) - &exp(&-&tb)).div(&tb).unwrap();
            assert!(eval_f(0, &tb, &c).overlaps(&closed), "t = {t}");
        }
    }

    #[test]
    fn derivative_law_pointwise() {
        // t F_n'(t) = n F_{n-1}(t) - F_n(t)
        let c = ctx();
        let p = c.working_bits();
        let t = Ball::from_f64(1.75, p);
        for n in 1..6u32 {
            let lhs = &t * &eval_f_derivative(n, &t, &c);
            let rhs = &eval_f(n - 1, &t, &c).mul_int(n as i64) - &eval_f(n, &t, &c);
            assert!(lhs.overlaps(&rhs));
        }
    }

    #[test]
    fn tail_respects_exponential_majorant() {
        let c = ctx();
        let p = c.working_bits();
        for (n, t) in [(0u32, 4.0f64), (3, -4.0), (5, 2.5), (2, -0.5)] {
            let tb = Ball::from_f64(t, p);
            let tr = eval_f_truncated(n, &tb, &c);
            let kk = tr.terms as i32; // first omitted index
            let mut maj = (factorial(n as u64).to_string().parse::<f64>().unwrap()) * t.abs().exp();
            for j in 1..=kk {
                maj *= t.abs() / j as f64;
            }
            assert!(tr.tail.bound.to_f64() <= maj * 1.0001, "n={n} t={t}");
            let expect = if t >= 0.0 { TailMethod::AlternatingNextTerm } else { TailMethod::GeometricMajorant };
            assert_eq!(tr.tail.method, expect);
        }
    }

    #[test]
    fn radius_meets_target() {
        let c = ctx();
        let v = eval_f(8, &Ball::one(c.working_bits()), &c);
        assert!(v.rad().to_f64() < 1e-40);
        let e = e_const(c.working_bits());
        let v = eval_f(2, &e, &c);
        assert!(v.rad().to_f64() < 1e-40);
    }
}
