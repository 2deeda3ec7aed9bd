//! Arbitrary-precision rational scalars and small integer helpers.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Exact rational scalar: arbitrary-precision numerator and denominator,
/// always gcd-reduced with positive denominator.
///
/// This is `num_rational::BigRational`; the alias names the role it plays
/// here (the coefficient field for all exact computations).
pub type Rational = num_rational::BigRational;

/// Builds the rational `n/d` from machine integers.
///
/// # Panics
///
/// Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "rational with zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer rational `n/1`.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact binomial coefficient C(n, k) as a big integer.
///
/// Returns zero when `k > n`, matching the combinatorial convention.
pub fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// Parses a rational from text.
///
/// Accepted forms, all converted exactly (no float rounding):
/// - integers: `"7"`, `"-3"`
/// - fractions: `"p/q"` with integer `p`, `q` and `q != 0`
/// - finite decimals: `"0.25"` becomes `1/4`, `"-1.5"` becomes `-3/2`
///
/// Returns `None` on malformed input or a zero denominator.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole: BigInt = if whole == "-" || whole.is_empty() {
            BigInt::zero()
        } else {
            whole.parse().ok()?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = frac.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = Rational::new(digits, scale);
        let whole_part = Rational::from_integer(whole);
        return Some(if negative {
            whole_part - frac_part
        } else {
            whole_part + frac_part
        });
    }
    let n: BigInt = text.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Formats a rational as `p/q` (or plain `p` for integers), the same form
/// [`parse_rational`] accepts.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Converts a rational to the nearest `f64`.
///
/// Values whose magnitude overflows `f64` map to `±inf`; this only matters
/// far outside the parameter ranges the laboratory works with.
pub fn rational_to_f64(value: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(value).unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}
