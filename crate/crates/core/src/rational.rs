//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"`, `"-p/q"`, `"+p"` or `"p"`. Whitespace anywhere is ignored.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    let bad = || Error::Parse(format!("invalid rational {text:?}"));
    let parse_int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix('+').unwrap_or(t);
        let body = digits.strip_prefix('-').unwrap_or(digits);
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        digits.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let p = parse_int(p)?;
            if q.starts_with('+') || q.starts_with('-') {
                return Err(bad());
            }
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(parse_int(&s)?)),
    }
}

/// Formats as `p/q`, or `p` for integers.
pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// Distance to the nearest integer, `‖x‖`.
pub fn dist_to_int(x: &Rational) -> Rational {
    let f = x.fract().abs();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if f > half {
        Rational::one() - f
    } else {
        f
    }
}

/// The nearest integer, or `None` when `x` is exactly halfway between two.
pub fn nearest_int(x: &Rational) -> Option<BigInt> {
    let twice = x * BigInt::from(2);
    if twice.is_integer() && !x.is_integer() {
        return None;
    }
    let shifted = x + Rational::new(BigInt::one(), BigInt::from(2));
    Some(floor(&shifted))
}

pub fn sign(x: &Rational) -> i64 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn to_i128(x: &BigInt, what: &str) -> Result<i128> {
    x.to_i128()
        .ok_or_else(|| Error::Overflow(format!("{what} does not fit in 128 bits")))
}

pub fn to_i64(x: &BigInt, what: &str) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::Overflow(format!("{what} does not fit in 64 bits")))
}

/// `(-1)^m`.
pub fn parity_sign(m: i64) -> i64 {
    if m.is_even() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signed_fractions_and_integers() {
        assert_eq!(parse_rational(" -3 / 10 ").unwrap(), ratio(-3, 10));
        assert_eq!(parse_rational("+7").unwrap(), int(7));
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn distance_and_rounding() {
        assert_eq!(dist_to_int(&ratio(6, 10)), ratio(2, 5));
        assert_eq!(dist_to_int(&ratio(-3, 10)), ratio(3, 10));
        assert_eq!(dist_to_int(&ratio(-7, 10)), ratio(3, 10));
        assert_eq!(nearest_int(&ratio(41, 10)), Some(BigInt::from(4)));
        assert_eq!(nearest_int(&ratio(-41, 10)), Some(BigInt::from(-4)));
        assert_eq!(nearest_int(&ratio(779, 10)), Some(BigInt::from(78)));
        assert_eq!(nearest_int(&ratio(5, 2)), None);
        assert_eq!(fmt_rational(&ratio(-6, 4)), "-3/2");
        assert_eq!(fmt_rational(&int(5)), "5");
    }
}
