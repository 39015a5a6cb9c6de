//! Serde adapters for arbitrary-precision values.
//!
//! Integers and rationals are written as decimal strings (`"-3"`, `"7/2"`).
//! Readers also accept plain JSON numbers. Ackermann indices are written as
//! numbers when they fit in a `u64` and as strings otherwise.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrString {
    Int(i64),
    UInt(u64),
    Str(String),
}

impl NumOrString {
    fn into_text(self) -> String {
        match self {
            NumOrString::Int(i) => i.to_string(),
            NumOrString::UInt(u) => u.to_string(),
            NumOrString::Str(s) => s,
        }
    }
}

pub fn parse_bigint(s: &str) -> Result<BigInt, String> {
    BigInt::from_str(s.trim()).map_err(|e| format!("invalid integer {s:?}: {e}"))
}

/// Parses `"p"` or `"p/q"` with `q ≠ 0`.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_bigint(s)?)),
        Some((n, d)) => {
            let n = parse_bigint(n)?;
            let d = parse_bigint(d)?;
            if d.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let raw = NumOrString::deserialize(d)?;
        parse_bigint(&raw.into_text()).map_err(de::Error::custom)
    }
}

pub mod bigint_vec {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "super::bigint")] BigInt);

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v: Vec<Wrap> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|w| w.0).collect())
    }
}

pub mod bigint_rows {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Row(#[serde(with = "super::bigint_vec")] Vec<BigInt>);

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let v: Vec<Row> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|r| r.0).collect())
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let raw = NumOrString::deserialize(d)?;
        parse_rational(&raw.into_text()).map_err(de::Error::custom)
    }
}

pub mod rational_vec {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "super::rational")] BigRational);

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let v: Vec<Wrap> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|w| w.0).collect())
    }
}

/// An Ackermann index as it appears in model and report files.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AckermannIndex(pub BigUint);

impl Serialize for AckermannIndex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(u) => s.serialize_u64(u),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for AckermannIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = NumOrString::deserialize(d)?.into_text();
        BigUint::from_str(text.trim())
            .map(AckermannIndex)
            .map_err(|e| de::Error::custom(format!("invalid Ackermann index {text:?}: {e}")))
    }
}
