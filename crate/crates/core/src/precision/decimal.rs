//! Decimal parsing and printing for balls.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ball::Ball;
use super::context::PrecisionContext;
use super::float::Float;
use crate::error::{Error, Result};

/// Parses a signed decimal with optional fraction and exponent into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let err = || Error::Parse(format!("not a decimal number: {s:?}"));
    let t = s.trim();
    let (neg, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = body[i + 1..].parse().map_err(|_| err())?;
            (&body[..i], e)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().map_err(|_| err())?;
    if neg {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 1_000_000 {
        return Err(Error::Parse(format!("exponent out of range in {s:?}")));
    }
    let ten = BigInt::from(10);
    let q = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(q)
}

/// Ball enclosing the exact value of a decimal string at the context's working precision.
pub fn enclose_decimal(s: &str, ctx: &PrecisionContext) -> Result<Ball> {
    let q = parse_decimal(s)?;
    Ok(Ball::from_rational(&q, ctx.working_bits()))
}

/// `floor(|x| * 10^digits)` computed exactly.
fn scaled_floor_abs(x: &Float, digits: u32) -> BigInt {
    let scaled = x.abs().mul(&Float::from_bigint(num_traits::pow(BigInt::from(10), digits as usize)));
    scaled.floor_int()
}

/// `round(|x| * 10^digits)` to nearest, ties away from zero.
fn scaled_round_abs(x: &Float, digits: u32) -> BigInt {
    let scaled = x.abs().mul(&Float::from_bigint(num_traits::pow(BigInt::from(10), digits as usize)));
    scaled.add(&Float::pow2(-1)).floor_int()
}

/// Formats `q / 10^digits` with an optional sign.
pub(crate) fn format_fixed(neg: bool, q: &BigInt, digits: u32) -> String {
    let p = num_traits::pow(BigInt::from(10), digits as usize);
    let (int, frac) = q.div_rem(&p);
    let sign = if neg && !q.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits as usize)
    }
}

/// How a ball is cut to a fixed number of fractional digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecimalMode {
    /// Round to nearest.
    Rounded,
    /// Truncate toward zero.
    Truncated,
}

/// Fixed-point rendering with `digits` fractional digits.
///
/// The flag is `true` when every point of the ball renders to the same string, i.e. the
/// printed digits are certified.
pub fn to_decimal_mode(x: &Ball, digits: u32, mode: DecimalMode) -> (String, bool) {
    let cut = |f: &Float| -> (bool, BigInt) {
        let q = match mode {
            DecimalMode::Rounded => scaled_round_abs(f, digits),
            DecimalMode::Truncated => scaled_floor_abs(f, digits),
        };
        (f.is_negative() && !q.is_zero(), q)
    };
    let mid = cut(x.mid());
    let text = format_fixed(mid.0, &mid.1, digits);
    if x.is_exact() {
        return (text, true);
    }
    let lo = cut(&x.lower());
    let hi = cut(&x.upper());
    let certified = lo == hi && lo == mid;
    (text, certified)
}

/// Correctly rounded fixed-point rendering with a certification flag.
pub fn to_decimal(x: &Ball, digits: u32) -> (String, bool) {
    to_decimal_mode(x, digits, DecimalMode::Rounded)
}

/// Truncated (toward zero) fixed-point rendering with a certification flag.
pub fn to_decimal_truncated(x: &Ball, digits: u32) -> (String, bool) {
    to_decimal_mode(x, digits, DecimalMode::Truncated)
}

/// Scientific rendering of the midpoint with `digits` significant digits, for diagnostics.
pub fn to_scientific(x: &Ball, digits: usize) -> String {
    let m = x.mid();
    if m.is_zero() {
        return "0".into();
    }
    // decimal exponent estimate from the binary one
    let e10 = ((m.top() - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let shift = digits as i64 - 1 - e10;
    let scaled = if shift >= 0 {
        m.abs().mul(&Float::from_bigint(num_traits::pow(BigInt::from(10), shift as usize)))
    } else {
        let q =
            BigRational::new(m.abs().floor_int() + BigInt::one(), num_traits::pow(BigInt::from(10), (-shift) as usize));
        Float::from_bigint(q.floor().to_integer())
    };
    let mut q = scaled.add(&Float::pow2(-1)).floor_int();
    let mut e = e10;
    if q.to_string().len() > digits {
        q /= 10;
        e += 1;
    }
    let s = q.to_string();
    let sign = if m.is_negative() { "-" } else { "" };
    let body = if s.len() > 1 { format!("{}.{}", &s[..1], &s[1..]) } else { s };
    format!("{sign}{body}e{e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::mag::Mag;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(30).unwrap()
    }

    #[test]
    fn exact_decimal_has_zero_radius() {
        let b = enclose_decimal("1.0", &ctx()).unwrap();
        assert!(b.is_exact());
        assert_eq!(b.mid(), &Float::one());
        let b = enclose_decimal("-2.5e-1", &ctx()).unwrap();
        assert!(b.is_exact());
        assert_eq!(b.mid().to_f64(), -0.25);
    }

    #[test]
    fn inexact_decimal_within_one_ulp() {
        let c = ctx();
        let b = enclose_decimal("0.1", &c).unwrap();
        assert!(!b.is_exact());
        let ten = Ball::from_i64(10, c.working_bits());
        assert!((&b * &ten).contains(&Float::one()));
        let ulp = 2f64.powi(-(c.working_bits() as i32) - 3);
        assert!(b.rad().to_f64() <= ulp * 2.0);
    }

    #[test]
    fn truncated_gamma_string_encloses_only_ten_digits() {
        let b = enclose_decimal("0.5772156649", &ctx()).unwrap();
        let (s, cert) = to_decimal(&b, 10);
        assert_eq!(s, "0.5772156649");
        assert!(cert);
        // gamma = 0.57721566490153... lies above the 10-digit rational
        assert!(!b.contains(&Float::from_f64(0.5772156649015329)));
    }

    #[test]
    fn malformed_inputs() {
        for s in ["", "abc", "1.2.3", "--1", "1e", ".", "1e5x"] {
            assert!(matches!(parse_decimal(s), Err(Error::Parse(_))), "{s}");
        }
        assert!(parse_decimal(".5").is_ok());
        assert!(parse_decimal("5.").is_ok());
    }

    #[test]
    fn exact_one_prints_certified() {
        assert_eq!(to_decimal(&Ball::one(64), 10), ("1.0000000000".to_string(), true));
    }

    #[test]
    fn wide_ball_is_not_certified() {
        let b = Ball::new(Float::from_f64(0.25), Mag::from_f64_upper(5e-4), 64);
        let (_, cert) = to_decimal(&b, 10);
        assert!(!cert);
    }

    #[test]
    fn truncation_goes_toward_zero() {
        let b = Ball::from_f64(-0.53193077006, 128);
        assert_eq!(to_decimal_truncated(&b, 10).0, "-0.5319307700");
        assert_eq!(to_decimal(&b, 10).0, "-0.5319307701");
        let tiny = Ball::from_f64(-1e-12, 128);
        assert_eq!(to_decimal_truncated(&tiny, 4).0, "0.0000");
    }

    #[test]
    fn scientific_rendering() {
        let b = Ball::from_f64(1234.5, 64);
        assert_eq!(to_scientific(&b, 4), "1.235e3");
        let b = Ball::from_f64(-0.000125, 64);
        assert_eq!(to_scientific(&b, 3), "-1.25e-4");
    }
}
