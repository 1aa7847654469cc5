//! Exact non-negative rational values.
//!
//! Every valuation, threshold and fairness factor in the crate is a [`Value`]:
//! a reduced fraction of arbitrary-precision integers that is never negative.
//! Subtraction is only available through [`Value::checked_sub`].

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Value(BigRational);

impl Value {
    pub fn zero() -> Self {
        Value(BigRational::zero())
    }

    pub fn one() -> Self {
        Value(BigRational::one())
    }

    pub fn from_integer(n: u64) -> Self {
        Value(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom`, reduced. Fails on a zero denominator.
    pub fn fraction(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Parse(format!("{numer}/0")));
        }
        Ok(Value(BigRational::new(BigInt::from(numer), BigInt::from(denom))))
    }

    pub fn from_big(numer: BigUint, denom: BigUint) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Parse(format!("{numer}/0")));
        }
        Ok(Value(BigRational::new(numer.into(), denom.into())))
    }

    /// Wraps a rational, rejecting negatives.
    pub fn from_ratio(r: BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::Parse(format!("negative value {r}")));
        }
        Ok(Value(r))
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// `self - rhs` when the result stays non-negative.
    pub fn checked_sub(&self, rhs: &Value) -> Option<Value> {
        if self.0 >= rhs.0 {
            Some(Value(&self.0 - &rhs.0))
        } else {
            None
        }
    }

    pub fn checked_div(&self, rhs: &Value) -> Option<Value> {
        if rhs.is_zero() {
            None
        } else {
            Some(Value(&self.0 / &rhs.0))
        }
    }

    pub fn recip(&self) -> Option<Value> {
        Value::one().checked_div(self)
    }

    pub fn pow(&self, exp: u32) -> Value {
        Value(Pow::pow(&self.0, exp))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// The smaller of `self` and one.
    pub fn cap_one(self) -> Value {
        if self.0 > BigRational::one() {
            Value::one()
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Parses `p`, `p/q` or a plain decimal such as `0.125`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(s.to_string());
        if s.is_empty() || s.starts_with('-') || s.starts_with('+') {
            return Err(bad());
        }
        if let Some((p, q)) = s.split_once('/') {
            let p: BigUint = p.trim().parse().map_err(|_| bad())?;
            let q: BigUint = q.trim().parse().map_err(|_| bad())?;
            return Value::from_big(p, q).map_err(|_| bad());
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
                return Err(bad());
            }
            let digits = format!("{int}{frac}");
            if !digits.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let p: BigUint = digits.parse().map_err(|_| bad())?;
            let q = Pow::pow(BigUint::from(10u32), frac.len());
            return Value::from_big(p, q);
        }
        let p: BigUint = s.parse().map_err(|_| bad())?;
        Ok(Value(BigRational::from_integer(p.into())))
    }

    /// Decimal rendering with a fixed number of fractional digits (truncated).
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let scale = Pow::pow(BigInt::from(10), digits);
        let scaled = (&self.0 * BigRational::from_integer(scale.clone())).floor().to_integer();
        let (int, frac) = scaled.div_rem(&scale);
        if digits == 0 {
            return int.to_string();
        }
        format!("{int}.{:0>width$}", frac.to_string(), width = digits)
    }
}

impl Default for Value {
    fn default() -> Self {
        Value::zero()
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::from_integer(n)
    }
}

impl FromStr for Value {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Value::parse(s)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a Value> for &'a Value {
    type Output = Value;
    fn add(self, rhs: &'a Value) -> Value {
        Value(&self.0 + &rhs.0)
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        Value(self.0 + rhs.0)
    }
}

impl AddAssign<&Value> for Value {
    fn add_assign(&mut self, rhs: &Value) {
        self.0 += &rhs.0;
    }
}

impl<'a> Mul<&'a Value> for &'a Value {
    type Output = Value;
    fn mul(self, rhs: &'a Value) -> Value {
        Value(&self.0 * &rhs.0)
    }
}

impl Mul for Value {
    type Output = Value;
    fn mul(self, rhs: Value) -> Value {
        Value(self.0 * rhs.0)
    }
}

/// Panics on a zero divisor, like integer division.
impl<'a> Div<&'a Value> for &'a Value {
    type Output = Value;
    fn div(self, rhs: &'a Value) -> Value {
        Value(&self.0 / &rhs.0)
    }
}

impl Div for Value {
    type Output = Value;
    fn div(self, rhs: Value) -> Value {
        Value(self.0 / rhs.0)
    }
}

impl<'a> Sum<&'a Value> for Value {
    fn sum<I: Iterator<Item = &'a Value>>(iter: I) -> Value {
        let mut acc = BigRational::zero();
        for v in iter {
            acc += &v.0;
        }
        Value(acc)
    }
}

impl Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        Value(iter.fold(BigRational::zero(), |acc, v| acc + v.0))
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ValueVisitor;

        impl<'de> Visitor<'de> for ValueVisitor {
            type Value = Value;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a non-negative fraction or decimal string, or a non-negative integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Value, E> {
                Value::parse(v).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Value, E> {
                Ok(Value::from_integer(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Value, E> {
                u64::try_from(v)
                    .map(Value::from_integer)
                    .map_err(|_| E::custom(format!("negative value {v}")))
            }
        }

        deserializer.deserialize_any(ValueVisitor)
    }
}

/// Shorthand used heavily in tests: `val("3/4")`. Panics on malformed input.
pub fn val(s: &str) -> Value {
    Value::parse(s).unwrap_or_else(|e| panic!("{e}"))
}
