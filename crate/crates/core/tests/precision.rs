use gconst_core::precision::{enclose_decimal, exp, to_decimal, Ball, Float, Mag, PrecisionContext};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use proptest::prelude::*;

#[derive(Debug, Clone, Copy)]
enum Op {
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Sqr(usize),
    Exp(usize),
    Half(usize),
}

fn op() -> impl Strategy<Value = Op> {
    (0..7u8, 0..8usize, 0..8usize).prop_map(|(k, i, j)| match k {
        0 => Op::Add(i, j),
        1 => Op::Sub(i, j),
        2 => Op::Mul(i, j),
        3 => Op::Div(i, j),
        4 => Op::Sqr(i),
        5 => Op::Exp(i),
        _ => Op::Half(i),
    })
}

fn operand() -> impl Strategy<Value = (f64, i64)> {
    (-8.0f64..8.0, 20i64..70)
}

/// Runs `ops` over a register of eight balls; the last written register is the result.
fn run(ops: &[Op], regs: &[Ball]) -> Ball {
    let mut r = regs.to_vec();
    let mut last = 0;
    for (step, &o) in ops.iter().enumerate() {
        let dst = step % r.len();
        let v = match o {
            Op::Add(i, j) => &r[i] + &r[j],
            Op::Sub(i, j) => &r[i] - &r[j],
            Op::Mul(i, j) => &r[i] * &r[j],
            Op::Div(i, j) => match r[i].div(&r[j]) {
                Ok(v) => v,
                Err(_) => continue,
            },
            Op::Sqr(i) => r[i].sqr(),
            Op::Exp(i) if r[i].mag_upper().to_f64() < 8.0 => exp(&r[i]),
            Op::Exp(_) => continue,
            Op::Half(i) => r[i].mul_2exp(-1),
        };
        if v.mag_upper().to_f64() > 1e12 {
            continue;
        }
        r[dst] = v;
        last = dst;
    }
    r[last].clone()
}

fn balls(ops: &[(f64, i64)], prec: u32, with_radius: bool) -> Vec<Ball> {
    ops.iter()
        .map(|&(m, e)| {
            let rad = if with_radius { Mag::pow2(-e) } else { Mag::zero() };
            Ball::new(Float::from_f64(m), rad, prec)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn finer_precision_stays_inside(
        xs in prop::collection::vec(operand(), 8),
        ops in prop::collection::vec(op(), 1..12),
        prec in 40u32..160,
    ) {
        let coarse = run(&ops, &balls(&xs, prec, true));
        let fine = run(&ops, &balls(&xs, 4 * prec, true));
        prop_assert!(coarse.contains(fine.mid()), "coarse {coarse:?} fine {fine:?}");
    }

    #[test]
    fn exact_rational_result_is_enclosed(
        xs in prop::collection::vec(-8.0f64..8.0, 3),
        prec in 30u32..200,
    ) {
        let b: Vec<Ball> = xs.iter().map(|&x| Ball::from_f64(x, prec)).collect();
        let q: Vec<BigRational> = xs.iter().map(|&x| BigRational::from_f64(x).unwrap()).collect();
        let got = &(&b[0] * &b[1]) - &(&b[2] * &b[2]);
        let exact = &q[0] * &q[1] - &q[2] * &q[2];
        prop_assert!(got.contains_ball(&Ball::from_rational(&exact, 4000)));
        if !q[2].is_zero() {
            let d = b[0].div(&b[2]).unwrap();
            prop_assert!(d.contains_ball(&Ball::from_rational(&(&q[0] / &q[2]), 4000)));
        }
    }

    #[test]
    fn doubling_precision_never_widens(
        xs in prop::collection::vec(operand(), 8),
        ops in prop::collection::vec(op(), 1..12),
        prec in 40u32..200,
    ) {
        let a = run(&ops, &balls(&xs, prec, false));
        let b = run(&ops, &balls(&xs, 2 * prec, false));
        prop_assert!(b.rad() <= a.rad(), "{:?} vs {:?}", a.rad(), b.rad());
    }

    #[test]
    fn decimal_round_trip(x in -1.0e6f64..1.0e6, digits in 1u32..30) {
        let ctx = PrecisionContext::new(40).unwrap();
        let third = Ball::from_f64(x, ctx.working_bits()).div(&Ball::from_i64(3, ctx.working_bits())).unwrap();
        let (s, certified) = to_decimal(&third, digits);
        prop_assert!(certified);
        let half_ulp = Mag::from_f64_upper(0.5 * 10f64.powi(-(digits as i32)) * (1.0 + 1e-9));
        let widened = enclose_decimal(&s, &ctx).unwrap().add_error(half_ulp);
        prop_assert!(widened.overlaps(&third));
    }
}

#[test]
fn rounding_of_printed_digits() {
    let ctx = PrecisionContext::new(30).unwrap();
    let x = enclose_decimal("2.718281828459045", &ctx).unwrap();
    assert_eq!(to_decimal(&x, 5), ("2.71828".to_string(), true));
    assert!(enclose_decimal("abc", &ctx).is_err());
    assert!(Ball::zero(64).recip().is_err());
}
