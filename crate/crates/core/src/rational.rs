//! Exact rational arithmetic for locations, distances and welfare values.
//!
//! Every quantity in this crate is an exact rational: mechanism rules involve
//! midpoints, reflections and order statistics, and approximation ratios are
//! compared against exact bounds, so floating point is never used. The type
//! wraps an arbitrary-precision `BigRational` kept in canonical reduced form
//! (positive denominator, gcd(p, q) = 1).

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number in canonical reduced form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

/// Error produced when a rational string cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds `num/den`. Fails on a zero denominator.
    pub fn new(num: i64, den: i64) -> Result<Self, RationalParseError> {
        if den == 0 {
            return Err(RationalParseError::ZeroDenominator(format!("{num}/{den}")));
        }
        Ok(Rational(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    /// Convenience constructor for literals known to be well-formed.
    ///
    /// Panics on a zero denominator; intended for constants in code, not input.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Builds a rational from an arbitrary-precision integer.
    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    /// Exact floor, as a big integer.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Exact ceiling, as a big integer.
    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Floor converted to `usize`; `None` if negative or out of range.
    pub fn floor_usize(&self) -> Option<usize> {
        self.floor_int().to_usize()
    }

    /// Midpoint of two values, `(a + b) / 2`.
    pub fn midpoint(a: &Self, b: &Self) -> Self {
        Rational((&a.0 + &b.0) / BigRational::from_integer(BigInt::from(2)))
    }

    /// Canonical `p/q` rendering, denominator always shown (e.g. `0/1`, `-3/2`).
    pub fn canonical(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }

    /// Best-effort f64 approximation, for display columns only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    /// Shortest exact form: integer values print without a denominator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = RationalParseError;

    /// Accepts `p`, `p/q` and finite decimals (`-0.25`, `.5`), with optional sign.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(RationalParseError::Empty);
        }
        let invalid = || RationalParseError::Invalid(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let n: BigInt = num.trim().parse().map_err(|_| invalid())?;
            let d: BigInt = den.trim().parse().map_err(|_| invalid())?;
            if d.is_zero() {
                return Err(RationalParseError::ZeroDenominator(s.to_string()));
            }
            return Ok(Rational(BigRational::new(n, d)));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let (sign, int_digits) = match int_part.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
            };
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(invalid());
            }
            if !int_digits.is_empty() && !int_digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(invalid());
            }
            let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac_part);
            let numer: BigInt = digits.parse().map_err(|_| invalid())?;
            let denom = BigInt::from(10u8).pow(frac_part.len() as u32);
            return Ok(Rational(BigRational::new(BigInt::from(sign) * numer, denom)));
        }
        let n: BigInt = s.parse().map_err(|_| invalid())?;
        Ok(Rational(BigRational::from_integer(n)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.canonical())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Absolute distance `|a - b|` between two points on the line.
pub fn distance(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_integer_fraction_and_decimal_forms() {
        assert_eq!(q("3"), Rational::from_int(3));
        assert_eq!(q("-2"), Rational::from_int(-2));
        assert_eq!(q("9/10"), Rational::ratio(9, 10));
        assert_eq!(q("-6/4"), Rational::ratio(-3, 2));
        assert_eq!(q("12.5"), Rational::ratio(25, 2));
        assert_eq!(q("-0.04"), Rational::ratio(-1, 25));
        assert_eq!(q(".5"), Rational::ratio(1, 2));
        assert_eq!(q("+1/3"), Rational::ratio(1, 3));
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in ["", "1/0", "a", "1..2", "1/", "/2", "1.2.3", "1 2", "0x3"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn canonical_form_always_shows_reduced_fraction() {
        assert_eq!(q("0").canonical(), "0/1");
        assert_eq!(q("4/6").canonical(), "2/3");
        assert_eq!(q("-4/6").canonical(), "-2/3");
        assert_eq!(q("4/-6").canonical(), "-2/3");
    }

    #[test]
    fn display_uses_shortest_form() {
        assert_eq!(q("4/2").to_string(), "2");
        assert_eq!(q("-1/2").to_string(), "-1/2");
    }

    #[test]
    fn arithmetic_is_exact() {
        assert_eq!(q("1/3") + q("1/6"), q("1/2"));
        assert_eq!(q("1/3") - q("1/2"), q("-1/6"));
        assert_eq!(q("2/3") * q("9/4"), q("3/2"));
        assert_eq!(q("1/3") / q("2/9"), q("3/2"));
        assert_eq!(distance(&q("1/5"), &q("9/10")), q("7/10"));
        assert_eq!(Rational::midpoint(&q("0"), &q("1/2")), q("1/4"));
    }

    #[test]
    fn ordering_is_by_value() {
        assert!(q("1/3") < q("1/2"));
        assert!(q("-1") < q("0"));
        assert_eq!(q("2/4").max(q("1/3")), q("1/2"));
    }

    #[test]
    fn floor_matches_integer_floor() {
        assert_eq!(q("7/2").floor_usize(), Some(3));
        assert_eq!(q("3").floor_usize(), Some(3));
        assert_eq!(q("-1/2").floor_usize(), None);
    }

    #[test]
    fn serde_round_trips_via_canonical_string() {
        let v = q("-9/12");
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, "\"-3/4\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }
}
