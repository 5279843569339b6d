//! Exact rational arithmetic helpers.
//!
//! Every cost, reward and bias in this crate is a [`Rational`]. The type is
//! `num_rational::BigRational`, which keeps values in lowest terms with a
//! positive denominator, so comparisons and arithmetic are exact.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from two machine integers.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Rational from an integer.
pub fn rat_int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or an integer string into a rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let numer: BigInt = numer
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational literal {text:?}")))?;
    let denom: BigInt = match denom {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Parse(format!("invalid rational literal {text:?}")))?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(numer, denom))
}

/// Renders a rational in lowest terms: `"p/q"`, or just `"p"` when integral.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal rendering with up to 15 significant digits, for reports only.
pub fn decimal_string(value: &Rational) -> String {
    const SIG: usize = 15;
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let abs = value.abs();
    let (numer, denom) = (abs.numer().clone(), abs.denom().clone());

    // Exponent e with 10^e <= |value| < 10^(e+1).
    let mut exp: i64 = 0;
    let ten = BigInt::from(10);
    let mut scaled_numer = numer.clone();
    let mut scaled_denom = denom.clone();
    while scaled_numer >= &scaled_denom * &ten {
        scaled_denom *= &ten;
        exp += 1;
    }
    while scaled_numer < scaled_denom {
        scaled_numer *= &ten;
        exp -= 1;
    }
    // First SIG digits, rounded half away from zero.
    let shift = ten.pow((SIG - 1) as u32);
    let (q, r) = (&scaled_numer * &shift).div_rem(&scaled_denom);
    let mut digits = if &r * 2 >= scaled_denom { q + 1 } else { q };
    // Rounding may carry into one extra digit (e.g. 999.. -> 1000..).
    if digits >= &shift * &ten {
        digits /= &ten;
        exp += 1;
    }
    let digit_str = digits.to_string();
    debug_assert_eq!(digit_str.len(), SIG);
    let digit_str = digit_str.trim_end_matches('0');
    let digit_str = if digit_str.is_empty() { "0" } else { digit_str };

    let sign = if negative { "-" } else { "" };
    let body = if exp >= 0 && (exp as usize) < SIG + 3 {
        let int_len = exp as usize + 1;
        if digit_str.len() <= int_len {
            format!("{digit_str}{}", "0".repeat(int_len - digit_str.len()))
        } else {
            format!("{}.{}", &digit_str[..int_len], &digit_str[int_len..])
        }
    } else if (-4..0).contains(&exp) {
        format!("0.{}{digit_str}", "0".repeat((-exp - 1) as usize))
    } else {
        let mantissa = if digit_str.len() == 1 {
            digit_str.to_string()
        } else {
            format!("{}.{}", &digit_str[..1], &digit_str[1..])
        };
        format!("{mantissa}e{exp}")
    };
    format!("{sign}{body}")
}

/// Best-effort float view, for log lines only.
pub fn to_f64(value: &Rational) -> f64 {
    value
        .numer()
        .to_f64()
        .and_then(|n| value.denom().to_f64().map(|d| n / d))
        .unwrap_or(f64::NAN)
}

/// Serde adapter storing rationals as `"p/q"` strings in lowest terms.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(de)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

trait DivRem {
    fn div_rem(&self, other: &BigInt) -> (BigInt, BigInt);
}

impl DivRem for BigInt {
    fn div_rem(&self, other: &BigInt) -> (BigInt, BigInt) {
        (self / other, self % other)
    }
}

/// True when `value` is a positive integer (used for family parameter checks
/// such as "1/a integral").
pub fn is_positive_integer(value: &Rational) -> bool {
    value.is_integer() && value.numer().sign() == Sign::Plus
}

/// Integer value of an integral rational.
pub fn integer_value(value: &Rational) -> Result<u64> {
    if !value.is_integer() {
        return Err(Error::Precondition(format!(
            "{} is not an integer",
            format_rational(value)
        )));
    }
    value
        .numer()
        .to_u64()
        .ok_or_else(|| Error::Precondition("integer out of range".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        let x = parse_rational("19/2").unwrap();
        assert_eq!(x, rat(19, 2));
        assert_eq!(format_rational(&x), "19/2");
        assert_eq!(format_rational(&parse_rational("38/4").unwrap()), "19/2");
        assert_eq!(format_rational(&rat_int(5)), "5");
        assert_eq!(format_rational(&rat(-3, 6)), "-1/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&rat_int(0)), "0");
        assert_eq!(decimal_string(&rat_int(27)), "27");
        assert_eq!(decimal_string(&rat(1, 2)), "0.5");
        assert_eq!(decimal_string(&rat(512, 13)), "39.3846153846154");
        assert_eq!(decimal_string(&rat(-1, 4)), "-0.25");
        assert_eq!(decimal_string(&rat(1, 10000)), "0.0001");
        assert_eq!(decimal_string(&rat(1, 1000000)), "1e-6");
    }

    #[test]
    fn exact_arithmetic() {
        let a = rat(13, 27);
        let b = rat(1, 54);
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(rat(1, 2) - rat(1, 54), rat(13, 27));
    }
}
