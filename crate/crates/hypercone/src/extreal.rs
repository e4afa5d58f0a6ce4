//! Exact arithmetic on the extended half-line `[0, +inf]`.
//!
//! Finite values are arbitrary-precision rationals. The conventions are the
//! ones every cone in this crate relies on:
//!
//! * `x + inf = inf` for every `x`;
//! * `0 * x = 0` for every `x`, including `x = inf`;
//! * `lambda * inf = inf` for `lambda > 0`;
//! * `0^p = 0` and `inf^p = inf` for `p > 0`, `0^p = inf` and `inf^p = 0` for `p < 0`.
//!
//! Irrational powers are never approximated here. [`ExtNonneg::pow`] fails with
//! [`Error::Irrational`] and callers that accept rounding use [`ExtNonneg::powf`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shorthand used throughout the crate.
pub type Rational = BigRational;

/// Build a rational from a numerator/denominator pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A value in `[0, +inf]` with an exact rational finite part.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtNonneg(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Finite(Rational),
    Infinity,
}

impl ExtNonneg {
    pub fn zero() -> Self {
        ExtNonneg(Repr::Finite(Rational::zero()))
    }

    pub fn one() -> Self {
        ExtNonneg(Repr::Finite(Rational::one()))
    }

    pub fn inf() -> Self {
        ExtNonneg(Repr::Infinity)
    }

    /// Wrap a rational, rejecting negative values.
    pub fn new(value: Rational) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::Input(format!(
                "negative value {value} is not in [0, inf]"
            )));
        }
        Ok(ExtNonneg(Repr::Finite(value)))
    }

    /// Nonnegative integer value.
    pub fn int(n: u64) -> Self {
        ExtNonneg(Repr::Finite(Rational::from_integer(BigInt::from(n))))
    }

    /// `num / den`; panics on a negative ratio or zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(rat(num, den)).expect("ratio must be nonnegative")
    }

    pub fn is_inf(&self) -> bool {
        matches!(self.0, Repr::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Finite(r) if r.is_zero())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match &self.0 {
            Repr::Finite(r) => Some(r),
            Repr::Infinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Finite(r) => r.to_f64().unwrap_or(f64::INFINITY),
            Repr::Infinity => f64::INFINITY,
        }
    }

    /// Multiply by a nonnegative rational scalar. `0 * inf = 0`.
    pub fn scale(&self, lambda: &Rational) -> Self {
        assert!(!lambda.is_negative(), "scalars must be nonnegative");
        if lambda.is_zero() {
            return Self::zero();
        }
        match &self.0 {
            Repr::Finite(r) => ExtNonneg(Repr::Finite(r * lambda)),
            Repr::Infinity => Self::inf(),
        }
    }

    /// The part at infinity: `0` for finite values, `inf` for `inf`.
    pub fn eps(&self) -> Self {
        if self.is_inf() {
            Self::inf()
        } else {
            Self::zero()
        }
    }

    /// Largest `z` with `b + z = self`. Requires `b <= self`.
    pub fn monus(&self, b: &Self) -> Result<Self> {
        if b > self {
            return Err(Error::NotComparable(format!("{b} exceeds {self}")));
        }
        Ok(match (&self.0, &b.0) {
            (Repr::Infinity, _) => Self::inf(),
            (Repr::Finite(a), Repr::Finite(b)) => ExtNonneg(Repr::Finite(a - b)),
            (Repr::Finite(_), Repr::Infinity) => unreachable!("b <= a was checked"),
        })
    }

    /// `self - b` when `b <= self`, else `0`. Total version of [`Self::monus`].
    pub fn saturating_sub(&self, b: &Self) -> Self {
        self.monus(b).unwrap_or_else(|_| Self::zero())
    }

    /// `1 / self` with `1/0 = inf` and `1/inf = 0`.
    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Infinity => Self::zero(),
            Repr::Finite(r) if r.is_zero() => Self::inf(),
            Repr::Finite(r) => ExtNonneg(Repr::Finite(r.recip())),
        }
    }

    /// Exact rational power. Fails when the result is irrational.
    pub fn pow(&self, p: &Rational) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::PowerZeroExponent);
        }
        let positive = p.is_positive();
        match &self.0 {
            Repr::Infinity => Ok(if positive { Self::inf() } else { Self::zero() }),
            Repr::Finite(r) if r.is_zero() => Ok(if positive { Self::zero() } else { Self::inf() }),
            Repr::Finite(r) => {
                let m = p.numer().clone();
                let k = p
                    .denom()
                    .to_u32()
                    .ok_or_else(|| Error::Input("exponent denominator too large".into()))?;
                let base = if m.is_negative() {
                    r.recip()
                } else {
                    r.clone()
                };
                let e = m
                    .abs()
                    .to_i32()
                    .ok_or_else(|| Error::Input("exponent numerator too large".into()))?;
                let raised = num::pow::pow(base, e as usize);
                let n = exact_root(raised.numer(), k).ok_or(Error::Irrational)?;
                let d = exact_root(raised.denom(), k).ok_or(Error::Irrational)?;
                Ok(ExtNonneg(Repr::Finite(Rational::new(n, d))))
            }
        }
    }

    /// Floating power with the same conventions as [`Self::pow`]; `p` must be nonzero.
    pub fn powf(&self, p: f64) -> f64 {
        powf_ext(self.to_f64(), p)
    }

    pub fn min_of(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max_of(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let r = n.nth_root(k);
    if num::pow::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// `x^p` on `[0, inf]` in floating point with the extended conventions.
pub fn powf_ext(x: f64, p: f64) -> f64 {
    debug_assert!(p != 0.0);
    if x == 0.0 {
        if p > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else if x.is_infinite() {
        if p > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        x.powf(p)
    }
}

impl PartialOrd for ExtNonneg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNonneg {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Infinity, Repr::Infinity) => Ordering::Equal,
            (Repr::Infinity, _) => Ordering::Greater,
            (_, Repr::Infinity) => Ordering::Less,
            (Repr::Finite(a), Repr::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for &ExtNonneg {
    type Output = ExtNonneg;
    fn add(self, rhs: &ExtNonneg) -> ExtNonneg {
        match (&self.0, &rhs.0) {
            (Repr::Finite(a), Repr::Finite(b)) => ExtNonneg(Repr::Finite(a + b)),
            _ => ExtNonneg::inf(),
        }
    }
}

impl Add for ExtNonneg {
    type Output = ExtNonneg;
    fn add(self, rhs: ExtNonneg) -> ExtNonneg {
        &self + &rhs
    }
}

impl Mul for &ExtNonneg {
    type Output = ExtNonneg;
    fn mul(self, rhs: &ExtNonneg) -> ExtNonneg {
        if self.is_zero() || rhs.is_zero() {
            return ExtNonneg::zero();
        }
        match (&self.0, &rhs.0) {
            (Repr::Finite(a), Repr::Finite(b)) => ExtNonneg(Repr::Finite(a * b)),
            _ => ExtNonneg::inf(),
        }
    }
}

impl Mul for ExtNonneg {
    type Output = ExtNonneg;
    fn mul(self, rhs: ExtNonneg) -> ExtNonneg {
        &self * &rhs
    }
}

impl std::iter::Sum for ExtNonneg {
    fn sum<I: Iterator<Item = ExtNonneg>>(iter: I) -> Self {
        iter.fold(ExtNonneg::zero(), |acc, x| &acc + &x)
    }
}

impl From<u64> for ExtNonneg {
    fn from(n: u64) -> Self {
        ExtNonneg::int(n)
    }
}

impl fmt::Display for ExtNonneg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Infinity => write!(f, "inf"),
            Repr::Finite(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Debug for ExtNonneg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExtNonneg {
    type Err = Error;
    /// Accepts `inf`, integers, `a/b` fractions and finite decimals.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "+inf" | "infinity" | "∞") {
            return Ok(Self::inf());
        }
        Self::new(parse_rational(s)?)
    }
}

/// Parse `a`, `a/b` or a finite decimal such as `-1.25` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Input(format!("cannot parse {s:?} as a rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num::pow::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

impl Serialize for ExtNonneg {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.0 {
            Repr::Infinity => serializer.serialize_str("inf"),
            Repr::Finite(r) => {
                let mut st = serializer.serialize_struct("Rational", 2)?;
                st.serialize_field("num", &json_int(r.numer()))?;
                st.serialize_field("den", &json_int(r.denom()))?;
                st.end()
            }
        }
    }
}

fn json_int(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(n.to_string()),
    }
}

fn int_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl<'de> Deserialize<'de> for ExtNonneg {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(deserializer)?;
        ext_from_json(&v).map_err(de::Error::custom)
    }
}

/// Decode the JSON scalar encoding. Also accepts bare numbers and fraction strings.
pub fn ext_from_json(v: &serde_json::Value) -> Result<ExtNonneg> {
    match v {
        serde_json::Value::String(s) => s.parse(),
        serde_json::Value::Number(n) => n.to_string().parse(),
        serde_json::Value::Object(map) => {
            let num = map.get("num").and_then(int_from_json);
            let den = map.get("den").and_then(int_from_json);
            match (num, den) {
                (Some(n), Some(d)) if !d.is_zero() => ExtNonneg::new(Rational::new(n, d)),
                _ => Err(Error::Input(format!("malformed rational object {v}"))),
            }
        }
        _ => Err(Error::Input(format!("expected a scalar, found {v}"))),
    }
}

/// Serde adapter for signed rationals, written as `"a/b"` strings and read
/// from strings or JSON numbers.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        from_value(&serde_json::Value::deserialize(d)?).map_err(de::Error::custom)
    }

    pub fn from_value(v: &serde_json::Value) -> Result<Rational> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) => parse_rational(&n.to_string()),
            _ => Err(Error::Input(format!("expected a rational, found {v}"))),
        }
    }

    /// The same encoding for a whole vector.
    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(
            rs: &[Rational],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(rs.iter().map(|r| r.to_string()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rational>, D::Error> {
            let items = Vec::<serde_json::Value>::deserialize(d)?;
            items
                .iter()
                .map(from_value)
                .collect::<Result<_>>()
                .map_err(de::Error::custom)
        }
    }

    /// Rows of rationals.
    pub mod matrix {
        use super::*;

        pub fn serialize<S: Serializer>(
            rows: &[Vec<Rational>],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(
                rows.iter()
                    .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            )
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
            let rows = Vec::<Vec<serde_json::Value>>::deserialize(d)?;
            rows.iter()
                .map(|r| r.iter().map(from_value).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()
                .map_err(de::Error::custom)
        }
    }
}

/// All four arithmetic results for one operand pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ArithReport {
    pub sum: ExtNonneg,
    pub product: ExtNonneg,
    pub scaled: ExtNonneg,
    pub power: Result<ExtNonneg>,
}

/// `a + b`, `a * b`, `lambda * a` and `a^p` in one call.
pub fn ext_arith(a: &ExtNonneg, b: &ExtNonneg, lambda: &Rational, p: &Rational) -> ArithReport {
    ArithReport {
        sum: a + b,
        product: a * b,
        scaled: a.scale(lambda),
        power: a.pow(p),
    }
}

/// `a ⊖ b` together with the part at infinity of `a`.
pub fn ext_diff_eps(a: &ExtNonneg, b: &ExtNonneg) -> Result<(ExtNonneg, ExtNonneg)> {
    Ok((a.monus(b)?, a.eps()))
}

/// Extended signed values, used by the logarithmic integrals.
///
/// Addition sends `(+inf) + (-inf)` to `-inf`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtSigned<T> {
    NegInf,
    Finite(T),
    PosInf,
}

impl<T: Add<Output = T>> Add for ExtSigned<T> {
    type Output = ExtSigned<T>;
    fn add(self, rhs: Self) -> Self {
        use ExtSigned::*;
        match (self, rhs) {
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }
}

impl ExtSigned<f64> {
    /// `exp` onto `[0, inf]`.
    pub fn exp(self) -> f64 {
        match self {
            ExtSigned::NegInf => 0.0,
            ExtSigned::PosInf => f64::INFINITY,
            ExtSigned::Finite(x) => x.exp(),
        }
    }

    pub fn neg(self) -> Self {
        match self {
            ExtSigned::NegInf => ExtSigned::PosInf,
            ExtSigned::PosInf => ExtSigned::NegInf,
            ExtSigned::Finite(x) => ExtSigned::Finite(-x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conventions() {
        assert_eq!(&ExtNonneg::inf() + &ExtNonneg::int(3), ExtNonneg::inf());
        assert_eq!(&ExtNonneg::zero() * &ExtNonneg::inf(), ExtNonneg::zero());
        assert_eq!(
            ExtNonneg::zero().pow(&rat(-2, 1)).unwrap(),
            ExtNonneg::inf()
        );
        assert_eq!(
            ExtNonneg::zero().pow(&rat(1, 2)).unwrap(),
            ExtNonneg::zero()
        );
        assert_eq!(ExtNonneg::inf().pow(&rat(1, 2)).unwrap(), ExtNonneg::inf());
        assert_eq!(
            ExtNonneg::inf().pow(&rat(-1, 3)).unwrap(),
            ExtNonneg::zero()
        );
        assert_eq!(
            ExtNonneg::int(3).pow(&rat(0, 1)),
            Err(Error::PowerZeroExponent)
        );
        assert_eq!(ExtNonneg::inf().scale(&rat(0, 1)), ExtNonneg::zero());
        assert_eq!(ExtNonneg::inf().scale(&rat(1, 5)), ExtNonneg::inf());
    }

    #[test]
    fn exact_powers() {
        assert_eq!(
            ExtNonneg::ratio(4, 9).pow(&rat(1, 2)).unwrap(),
            ExtNonneg::ratio(2, 3)
        );
        assert_eq!(
            ExtNonneg::ratio(4, 9).pow(&rat(-3, 2)).unwrap(),
            ExtNonneg::ratio(27, 8)
        );
        assert_eq!(ExtNonneg::int(2).pow(&rat(1, 2)), Err(Error::Irrational));
        assert!((ExtNonneg::int(2).powf(0.5) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn difference_and_eps() {
        let (d, e) = ext_diff_eps(&ExtNonneg::int(5), &ExtNonneg::int(3)).unwrap();
        assert_eq!((d, e), (ExtNonneg::int(2), ExtNonneg::zero()));
        let (d, e) = ext_diff_eps(&ExtNonneg::inf(), &ExtNonneg::int(3)).unwrap();
        assert_eq!((d, e), (ExtNonneg::inf(), ExtNonneg::inf()));
        assert!(matches!(
            ExtNonneg::int(3).monus(&ExtNonneg::int(5)),
            Err(Error::NotComparable(_))
        ));
        assert_eq!(ExtNonneg::int(7).eps(), ExtNonneg::zero());
    }

    #[test]
    fn json_roundtrip() {
        for v in [
            ExtNonneg::inf(),
            ExtNonneg::ratio(-3, -4),
            ExtNonneg::zero(),
        ] {
            let s = serde_json::to_string(&v).unwrap();
            let back: ExtNonneg = serde_json::from_str(&s).unwrap();
            assert_eq!(v, back);
        }
        assert_eq!(
            serde_json::to_string(&ExtNonneg::ratio(3, 4)).unwrap(),
            r#"{"num":3,"den":4}"#
        );
        assert_eq!(
            serde_json::to_string(&ExtNonneg::inf()).unwrap(),
            r#""inf""#
        );
        assert_eq!("2.5".parse::<ExtNonneg>().unwrap(), ExtNonneg::ratio(5, 2));
    }

    #[test]
    fn signed_sum_prefers_negative_infinity() {
        let s = ExtSigned::PosInf + ExtSigned::<f64>::NegInf;
        assert_eq!(s, ExtSigned::NegInf);
        assert_eq!(
            ExtSigned::Finite(1.0) + ExtSigned::PosInf,
            ExtSigned::PosInf
        );
    }
}
