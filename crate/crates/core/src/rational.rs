//! Exact rationals as they appear in files and reports.
//!
//! The text form is `p/q` (or a bare integer `p`), with `q > 0`. Values are
//! reduced on load, so `"2/4"` and `"1/2"` compare equal.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::input(format!("malformed rational {text:?}, expected \"p/q\""));
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let is_int = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num) || !is_int(den) || den.starts_with('-') {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::input(format!(
            "rational {text:?} has a zero denominator"
        )));
    }
    Ok(BigRational::new(num, den))
}

/// Canonical `p/q` text; integers keep the `/1` so the format is uniform.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn from_uint(value: &BigUint) -> Rational {
    BigRational::from_integer(BigInt::from(value.clone()))
}

pub fn recip_uint(value: &BigUint) -> Rational {
    BigRational::new(BigInt::one(), BigInt::from(value.clone()))
}

/// Decimal approximation with `digits` significant digits. Display only.
pub fn approx_decimal(value: &Rational, digits: usize) -> String {
    let digits = digits.max(1);
    if value.is_zero() {
        return "0".to_string();
    }
    let Some(f) = value.to_f64().filter(|f| f.is_finite() && *f != 0.0) else {
        // Outside f64 range: report the order of magnitude from digit counts.
        let exp =
            value.numer().abs().to_string().len() as i64 - value.denom().to_string().len() as i64;
        let sign = if value.is_negative() { "-" } else { "" };
        return format!("{sign}~1e{exp}");
    };
    let exp = f.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{f:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{:.*e}", digits - 1, f);
        match s.split_once('e') {
            Some((mantissa, e)) if mantissa.contains('.') => {
                let m = mantissa.trim_end_matches('0').trim_end_matches('.');
                format!("{m}e{e}")
            }
            _ => s,
        }
    }
}

pub(crate) fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(value))
}

pub(crate) fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let text = String::deserialize(d)?;
    parse_rational(&text).map_err(serde::de::Error::custom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("1/2").unwrap(), r(1, 2));
        assert_eq!(parse_rational("2/4").unwrap(), r(1, 2));
        assert_eq!(parse_rational(" 3 ").unwrap(), r(3, 1));
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/", "/2", "1/0", "a/b", "1/-2", "0.5", "1//2"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn decimal_display() {
        assert_eq!(approx_decimal(&r(1, 3), 6), "0.333333");
        assert_eq!(approx_decimal(&r(1, 2), 6), "0.5");
        assert_eq!(approx_decimal(&r(0, 1), 6), "0");
        assert_eq!(approx_decimal(&r(1, 450_000_000_000), 6), "2.22222e-12");
    }
}
