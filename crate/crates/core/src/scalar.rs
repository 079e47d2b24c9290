//! Exact rational scalars.
//!
//! Every distance, slope, constant and bound in this crate is an
//! [`ExactScalar`]. Values that fit in machine words are kept as
//! `Ratio<i64>`; any operation that would overflow is redone on
//! arbitrary-precision integers, and results are shrunk back whenever they
//! fit again. The representation is canonical, so structural equality and
//! hashing agree with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

type Small = Ratio<i64>;

#[derive(Clone)]
enum Repr {
    Small(Small),
    Big(BigRational),
}

/// An exact rational number in lowest terms with a positive denominator.
#[derive(Clone)]
pub struct ExactScalar(Repr);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseScalarError {
    #[error("empty rational literal")]
    Empty,
    #[error("decimal and exponent notation is not accepted, write `p/q`: {0:?}")]
    Decimal(String),
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

fn small_ok(r: &Small) -> bool {
    *r.numer() != i64::MIN && *r.denom() != i64::MIN
}

fn shrink(r: BigRational) -> ExactScalar {
    if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
        if n != i64::MIN && d != i64::MIN {
            return ExactScalar(Repr::Small(Ratio::new_raw(n, d)));
        }
    }
    ExactScalar(Repr::Big(r))
}

fn widen(r: &Small) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

impl ExactScalar {
    /// `numer / denom`, reduced. Panics when `denom` is zero.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::from_big(BigInt::from(numer), BigInt::from(denom))
    }

    pub fn from_integer(value: i64) -> Self {
        Self::new(value, 1)
    }

    /// Panics when `denom` is zero.
    pub fn from_big(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        shrink(BigRational::new(numer, denom))
    }

    pub fn zero() -> Self {
        ExactScalar(Repr::Small(Small::zero()))
    }

    pub fn one() -> Self {
        ExactScalar(Repr::Small(Small::one()))
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => widen(r),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.numer()),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.denom()),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_zero(),
            Repr::Big(r) => r.is_zero(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_positive(),
            Repr::Big(r) => r.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_negative(),
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_integer(),
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn abs(&self) -> Self {
        match &self.0 {
            Repr::Small(r) => ExactScalar(Repr::Small(r.abs())),
            Repr::Big(r) => shrink(r.abs()),
        }
    }

    /// `|self - other|`, the metric of the real line.
    pub fn abs_diff(&self, other: &Self) -> Self {
        (self - other).abs()
    }

    /// Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small(r) => ExactScalar(Repr::Small(r.recip())),
            Repr::Big(r) => shrink(r.recip()),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Midpoint of two values.
    pub fn midpoint(&self, other: &Self) -> Self {
        (self + other) / Self::from_integer(2)
    }

    /// Lossy conversion for display only.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(r) if r.is_integer() => Some(*r.numer()),
            _ => None,
        }
    }

    pub fn floor(&self) -> Self {
        match &self.0 {
            Repr::Small(r) => ExactScalar(Repr::Small(r.floor())),
            Repr::Big(r) => shrink(r.floor()),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
                    if let Some(r) = a.$checked(b) {
                        if small_ok(&r) {
                            return ExactScalar(Repr::Small(r));
                        }
                    }
                }
                shrink($trait::$method(self.to_big(), rhs.to_big()))
            }
        }
        impl $trait<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                $trait::$method(self, &rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Div<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(r) = a.checked_div(b) {
                if small_ok(&r) {
                    return ExactScalar(Repr::Small(r));
                }
            }
        }
        shrink(self.to_big() / rhs.to_big())
    }
}

impl Div<ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: ExactScalar) -> ExactScalar {
        &self / &rhs
    }
}

impl Div<&ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        &self / rhs
    }
}

impl Div<ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: ExactScalar) -> ExactScalar {
        self / &rhs
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        match &self.0 {
            // numerators never hold i64::MIN, so this cannot overflow
            Repr::Small(r) => ExactScalar(Repr::Small(-*r)),
            Repr::Big(r) => shrink(-r.clone()),
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl Sum for ExactScalar {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.numer() == b.numer() && a.denom() == b.denom(),
            (Repr::Big(a), Repr::Big(b)) => a.numer() == b.numer() && a.denom() == b.denom(),
            _ => false,
        }
    }
}

impl Eq for ExactScalar {}

impl Hash for ExactScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.numer().hash(state);
        self.denom().hash(state);
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt, ParseScalarError> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseScalarError::Malformed(whole.to_string()));
    }
    s.parse::<BigInt>().map_err(|_| ParseScalarError::Malformed(whole.to_string()))
}

impl FromStr for ExactScalar {
    type Err = ParseScalarError;

    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let s = raw.trim();
        if s.is_empty() {
            return Err(ParseScalarError::Empty);
        }
        if s.contains(['.', 'e', 'E']) {
            return Err(ParseScalarError::Decimal(raw.to_string()));
        }
        match s.split_once('/') {
            None => Ok(Self::from_big(parse_int(s, raw)?, BigInt::one())),
            Some((n, d)) => {
                let numer = parse_int(n.trim(), raw)?;
                let d = d.trim();
                if d.starts_with(['+', '-']) {
                    return Err(ParseScalarError::Malformed(raw.to_string()));
                }
                let denom = parse_int(d, raw)?;
                if denom.is_zero() {
                    return Err(ParseScalarError::ZeroDenominator(raw.to_string()));
                }
                Ok(Self::from_big(numer, denom))
            }
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

struct ScalarVisitor;

impl<'de> Visitor<'de> for ScalarVisitor {
    type Value = ExactScalar;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a rational as a \"p/q\" string or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<ExactScalar, E> {
        v.parse().map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExactScalar, E> {
        Ok(ExactScalar::from_integer(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExactScalar, E> {
        Ok(ExactScalar::from_big(BigInt::from(v), BigInt::one()))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExactScalar, E> {
        Err(E::custom(format!(
            "floating-point literal {v} is not accepted, write the rational as a \"p/q\" string"
        )))
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(ScalarVisitor)
    }
}

/// Shorthand for literals in tests and fixtures: `q("5/6")`.
///
/// Panics on malformed input.
pub fn q(s: &str) -> ExactScalar {
    s.parse().unwrap_or_else(|e| panic!("bad rational literal {s:?}: {e}"))
}
