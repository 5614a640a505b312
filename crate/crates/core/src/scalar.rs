//! Scalar abstraction shared by the feasibility engine and decomposition weights.
//!
//! Exact rational arithmetic and floating point are interchangeable behind
//! [`Scalar`]. Floating types compare against a caller-supplied tolerance;
//! the exact type compares with a tolerance of zero.

use std::fmt::{Debug, Display};
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// `true` when arithmetic is exact and tolerances are ignored.
    const EXACT: bool;

    fn from_rational(r: &BigRational) -> Self;

    fn from_i64(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Exact rational value, if finite.
    fn to_rational(&self) -> Option<BigRational>;

    /// JSON form: a decimal number for floats, a `"p/q"` string for rationals.
    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Option<Self>;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Sign of `self` treating `|self| <= eps` as zero.
    fn sign_tol(&self, eps: &Self) -> i8 {
        if *self > *eps {
            1
        } else if *self < -eps.clone() {
            -1
        } else {
            0
        }
    }

    fn is_zero_tol(&self, eps: &Self) -> bool {
        self.sign_tol(eps) == 0
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Option<BigRational> {
        rational_from_f64(*self)
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::Number(n) => n.as_f64(),
            Value::String(s) => parse_rational(s).map(|r| Self::from_rational(&r)),
            _ => None,
        }
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f32(r).unwrap_or(f32::NAN)
    }

    fn from_i64(v: i64) -> Self {
        v as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn to_rational(&self) -> Option<BigRational> {
        rational_from_f64(*self as f64)
    }

    fn to_json(&self) -> Value {
        (*self as f64).to_json()
    }

    fn from_json(v: &Value) -> Option<Self> {
        f64::from_json(v).map(|x| x as f32)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Some(Self::from_i64(i))
                } else {
                    parse_rational(&n.to_string())
                }
            }
            _ => None,
        }
    }

    fn abs_val(&self) -> Self {
        Signed::abs(self)
    }

    fn sign_tol(&self, _eps: &Self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

/// Formats a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, an integer, or a finite decimal literal (`"0.25"`,
/// `"-1.5e-3"`) into an exact rational. Decimals are read digit-for-digit,
/// not through binary floating point.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let numer = BigInt::from_str(&format!("{int_part}{frac_part}")).ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(numer);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -r } else { r })
}

/// Converts an `f64` to the exact rational it represents.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/2"), Some(rat(1, 2)));
        assert_eq!(parse_rational(" -3/6 "), Some(rat(-1, 2)));
        assert_eq!(parse_rational("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rational("7"), Some(rat(7, 1)));
        assert_eq!(parse_rational("1e-2"), Some(rat(1, 100)));
        assert_eq!(parse_rational(".5"), Some(rat(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn json_forms() {
        assert_eq!(rat(3, 4).to_json(), Value::String("3/4".into()));
        assert_eq!(rat(2, 1).to_json(), Value::String("2".into()));
        assert_eq!(BigRational::from_json(&Value::String("1/3".into())), Some(rat(1, 3)));
        assert_eq!(f64::from_json(&Value::String("1/4".into())), Some(0.25));
        assert_eq!(0.5f64.to_json(), serde_json::json!(0.5));
    }

    #[test]
    fn tolerant_sign() {
        assert_eq!(1e-12f64.sign_tol(&1e-9), 0);
        assert_eq!((-1e-6f64).sign_tol(&1e-9), -1);
        assert_eq!(rat(1, 1_000_000_000).sign_tol(&rat(1, 1)), 1);
    }
}
