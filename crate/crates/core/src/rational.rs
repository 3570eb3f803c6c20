//! Exact rational numbers and their decimal round trips.
//!
//! All quantities in this crate are exact: every strict inequality the
//! calculi rely on (leap detection, congruence, probability bounds) is
//! decidable. Input decimals convert exactly (`"0.5185"` becomes
//! 5185/10000 in lowest terms) and are never rounded on the way in.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical reduced form
/// (gcd(|numerator|, denominator) = 1, denominator > 0).
pub type Rational = num::BigRational;

/// Shorthand for small rational constants, mostly in tests and examples.
pub fn ratio(numerator: i64, denominator: i64) -> Rational {
    Rational::new(numerator.into(), denominator.into())
}

/// Parses an exact number: a decimal string (`"0.5185"`, `"-2.5"`, `"3"`)
/// or a fraction (`"5/11"`). Fractions cover values with no finite decimal
/// expansion, e.g. `"1/3"`.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim();
    let fail = |reason| Error::InvalidNumber {
        input: input.to_owned(),
        reason,
    };
    if s.is_empty() {
        return Err(fail("empty string"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| fail("bad numerator"))?;
        let den = BigInt::from_str(den.trim()).map_err(|_| fail("bad denominator"))?;
        if den.is_zero() {
            return Err(fail("zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(fail("no digits"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(fail("not a decimal or fraction"));
    }
    let mut numerator = if int_part.is_empty() {
        BigInt::zero()
    } else {
        BigInt::from_str(int_part).expect("digits checked")
    };
    let scale = BigInt::from(10u8).pow(frac_part.len() as u32);
    numerator *= &scale;
    if !frac_part.is_empty() {
        numerator += BigInt::from_str(frac_part).expect("digits checked");
    }
    Ok(Rational::new(numerator * BigInt::from(sign), scale))
}

/// Renders `value` with exactly `places` digits after the decimal point,
/// rounding half to even.
pub fn format_decimal(value: &Rational, places: usize) -> String {
    let scale = BigInt::from(10u8).pow(places as u32);
    let scaled = value.abs() * Rational::from_integer(scale.clone());
    let (mut quotient, remainder) = scaled.numer().div_rem(scaled.denom());
    let twice = &remainder * BigInt::from(2);
    let rounds_up = match twice.cmp(scaled.denom()) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => quotient.is_odd(),
        std::cmp::Ordering::Less => false,
    };
    if rounds_up {
        quotient += BigInt::one();
    }
    let sign = if value.is_negative() && !quotient.is_zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        return format!("{sign}{quotient}");
    }
    let (int_part, frac_part) = quotient.div_rem(&scale);
    format!("{sign}{int_part}.{frac_part:0places$}")
}

/// Renders `value` as `numerator/denominator` (just the numerator for
/// whole numbers).
pub fn format_fraction(value: &Rational) -> String {
    value.to_string()
}
