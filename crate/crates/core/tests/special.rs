use gconst_core::precision::{enclose_decimal, exp, pi, Ball, Mag, PrecisionContext};
use gconst_core::special::{
    bernoulli, chebyshev_psi, ei, euler_gamma, factorial, lambert_w, zeta_euler_maclaurin, zeta_int, zeta_int_prec,
};
use proptest::prelude::*;

fn ctx(d: u32) -> PrecisionContext {
    PrecisionContext::new(d).unwrap()
}

/// Reference digits carry their own last-place error.
fn oracle(s: &str, c: &PrecisionContext) -> Ball {
    enclose_decimal(s, c).unwrap().add_error(Mag::from_f64_upper(1e-55))
}

#[test]
fn frozen_values() {
    let c = ctx(50);
    let cases = [
        (zeta_int(3, &c).unwrap(), "1.20205690315959428539973816151144999076498629234049888179227"),
        (zeta_int(5, &c).unwrap(), "1.03692775514336992633136548645703416805708091950191281197419"),
        (euler_gamma(&c), "0.577215664901532860606512090082402431042159335939923598805767"),
        (
            lambert_w(&Ball::one(c.working_bits()), &c).unwrap(),
            "0.567143290409783872999968662210355549753815787186512508135131",
        ),
        (
            lambert_w(&Ball::from_i64(10, c.working_bits()), &c).unwrap(),
            "1.74552800274069938307430126487538991153528812908094133132221",
        ),
        (
            ei(&Ball::one(c.working_bits()), &c).unwrap(),
            "1.89511781635593675546652093433163426901706058173270759164623",
        ),
        (
            ei(&Ball::from_i64(-1, c.working_bits()), &c).unwrap(),
            "-0.219383934395520273677163775460121649031047293406908207577979",
        ),
        (
            ei(&Ball::from_i64(2, c.working_bits()), &c).unwrap(),
            "4.9542343560018901633795051302270352755180535624200420545271",
        ),
    ];
    for (i, (got, want)) in cases.iter().enumerate() {
        let w = oracle(want, &c);
        assert!(got.overlaps(&w), "case {i}: {got:?}");
        assert!(got.rad().to_f64() < 1e-48, "case {i}: radius {:e}", got.rad().to_f64());
    }
}

#[test]
fn zeta_even_closed_form_agrees() {
    let prec = ctx(40).working_bits();
    for j in 1..=10u32 {
        let s = 2 * j;
        let em = zeta_euler_maclaurin(s, prec).unwrap();
        // (2 pi)^(2j) |B_2j| / (2 (2j)!)
        let b = Ball::from_rational(&bernoulli(s as usize), prec).abs();
        let f = Ball::from_biguint(&factorial(s as u64), prec).mul_int(2);
        let cf = (&pi(prec).mul_2exp(1).pow_u(s as u64) * &b).div(&f).unwrap();
        assert!(em.overlaps(&cf), "s = {s}");
        assert!(zeta_int_prec(s, prec).unwrap().overlaps(&em));
    }
}

#[test]
fn zeta_rejects_pole() {
    assert!(zeta_int(1, &ctx(20)).is_err());
}

#[test]
fn psi_ratio_tends_to_one() {
    let c = ctx(20);
    let dev = |k: u64| (chebyshev_psi(k + 1, &c).unwrap().to_f64() / (k + 1) as f64 - 1.0).abs();
    assert!(dev(1000) < dev(100), "{} {}", dev(100), dev(1000));
}

#[test]
fn lambert_w_domain() {
    let c = ctx(20);
    let w0 = lambert_w(&Ball::zero(c.working_bits()), &c).unwrap();
    assert!(w0.contains_zero());
    assert!(lambert_w(&Ball::from_i64(-1, c.working_bits()), &c).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn lambert_w_residual(x in 1e-6f64..=50.0) {
        let c = ctx(30);
        let xb = Ball::from_f64(x, c.working_bits());
        let w = lambert_w(&xb, &c).unwrap();
        let back = &w * &exp(&w);
        prop_assert!(back.overlaps(&xb));
        prop_assert!(back.rad().to_f64() < 1e-25 * x.max(1.0));
    }

    #[test]
    fn ei_derivative_matches(x in prop_oneof![-2.0f64..-0.05, 0.05f64..2.0]) {
        // Central differences of midpoints at x - h, x, x + h against e^x / x.
        let c = ctx(40);
        let p = c.working_bits();
        let h = 1e-12;
        let at = |v: f64| ei(&Ball::from_f64(v, p), &c).unwrap();
        let (lo, mid, hi) = (at(x - h), at(x), at(x + h));
        let fd = (&hi - &lo).div(&Ball::from_f64(2.0 * h, p)).unwrap().to_f64();
        let exact = x.exp() / x;
        prop_assert!(mid.rad().to_f64() < 1e-35);
        // second-order error of the stencil plus the f64 spacing of the nodes
        prop_assert!((fd - exact).abs() <= 10.0 * (h * h * 10.0 + 1e-16 / h * exact.abs().max(1.0)));
    }
}
