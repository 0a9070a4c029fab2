//! Exact rational helpers and the `"p/q"` string encoding used in every
//! file format of the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {0:?} as a rational (expected an integer or \"p/q\")")]
pub struct ParseRationalError(pub String);

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn q_vec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((a, b)) => {
            let num: BigInt = a.trim().parse().map_err(|_| err())?;
            let den: BigInt = b.trim().parse().map_err(|_| err())?;
            if den.is_zero() {
                return Err(err());
            }
            Ok(Q::new(num, den))
        }
        None => t.parse::<BigInt>().map(Q::from_integer).map_err(|_| err()),
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise (reduced, q > 0).
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[Q], b: &[u32]) -> Q {
    a.iter()
        .zip(b)
        .fold(Q::zero(), |acc, (x, &y)| acc + x * Q::from_integer(BigInt::from(y)))
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Scales a rational vector by a positive factor so that it becomes a
/// primitive integer vector. The zero vector is returned unchanged.
pub fn primitive_integer(v: &[Q]) -> Vec<Q> {
    if v.iter().all(Zero::is_zero) {
        return v.to_vec();
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| Q::from_integer(x / &g)).collect()
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Best rational approximation with denominator at most `max_den`
/// (continued fractions). Returns `None` for non-finite input.
pub fn rationalize(x: f64, max_den: i64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i64;
        let p2 = a.checked_mul(p1).and_then(|t| t.checked_add(p0))?;
        let q2 = a.checked_mul(q1).and_then(|t| t.checked_add(q0))?;
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a as f64;
        if frac < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let r = q_frac(p1, q1);
    Some(if neg { -r } else { r })
}

/// Rational input: a `"p/q"` string or a JSON integer.
#[derive(Debug, Clone, serde::Deserialize)]
#[serde(untagged)]
pub enum QText {
    Int(i64),
    Str(String),
}

impl QText {
    pub fn parse(&self) -> Result<Q, ParseRationalError> {
        match self {
            Self::Int(i) => Ok(q(*i)),
            Self::Str(s) => parse_q(s),
        }
    }
}

/// Serde adapters writing rationals as strings and reading strings or
/// integers.
pub mod serde_q {
    use super::{fmt_q, QText, Q};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        QText::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

pub mod serde_q_vec {
    use super::{fmt_q, QText, Q};
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(fmt_q).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let v = Vec::<QText>::deserialize(d)?;
        v.iter().map(|s| s.parse().map_err(D::Error::custom)).collect()
    }
}

pub mod serde_q_vec_vec {
    use super::{fmt_q, QText, Q};
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|row| row.iter().map(fmt_q).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        let v = Vec::<Vec<QText>>::deserialize(d)?;
        v.iter()
            .map(|row| row.iter().map(|s| s.parse().map_err(D::Error::custom)).collect())
            .collect()
    }
}

pub mod serde_q_opt {
    use super::{fmt_q, QText, Q};
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(fmt_q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        Option::<QText>::deserialize(d)?
            .map(|s| s.parse().map_err(D::Error::custom))
            .transpose()
    }
}
