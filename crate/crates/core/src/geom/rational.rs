//! Text form of rationals: `p/q` or `p`, optional leading sign.

use super::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed rational literal {:?}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

fn digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses `[+-]digits[/digits]`. The denominator must be positive.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let (negative, body) = match text.as_bytes().first() {
        Some(b'-') => (true, &text[1..]),
        Some(b'+') => (false, &text[1..]),
        _ => (false, text),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (digits(n).ok_or_else(err)?, digits(d).ok_or_else(err)?),
        None => (digits(body).ok_or_else(err)?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(err());
    }
    let num = if negative { -num } else { num };
    Ok(Rational::new(num, den))
}

/// Canonical text: reduced, denominator omitted when it is 1.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Smallest integer not below `value`.
pub fn ceil_to_integer(value: &Rational) -> BigInt {
    value.ceil().to_integer()
}

/// `|value|` as a rational, kept here so callers need not import `Signed`.
pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parses_signed_forms() {
        assert_eq!(parse_rational("3/5").unwrap(), r(3, 5));
        assert_eq!(parse_rational("-3/5").unwrap(), r(-3, 5));
        assert_eq!(parse_rational("+7").unwrap(), r(7, 1));
        assert_eq!(parse_rational("4/8").unwrap(), r(1, 2));
        assert_eq!(parse_rational("0").unwrap(), r(0, 1));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "-", "1/", "/2", "1/0", "1.5", "3/-4", "a", "1/2/3", " 1"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn canonical_text() {
        assert_eq!(format_rational(&r(6, 4)), "3/2");
        assert_eq!(format_rational(&r(-6, 3)), "-2");
        assert_eq!(format_rational(&r(0, 9)), "0");
    }
}
