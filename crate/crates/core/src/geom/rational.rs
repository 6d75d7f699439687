//! Exact rational scalars and their `"p/q"` text encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

/// Exact coordinate type used by every predicate in the crate.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn half() -> Q {
    q(1, 2)
}

pub fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        // Very large numerators/denominators: fall back to a scaled division.
        let n = v.numer().to_f64().unwrap_or(f64::MAX);
        let d = v.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Floor of `v / step` as an exact integer multiple: largest `k*step <= v`.
pub fn floor_to(v: &Q, origin: &Q, step: &Q) -> Q {
    let k = ((v - origin) / step).floor();
    origin + k * step
}

pub fn ceil_to(v: &Q, origin: &Q, step: &Q) -> Q {
    let k = ((v - origin) / step).ceil();
    origin + k * step
}

/// True when `v` is `origin + k*step` for an integer `k`.
pub fn is_multiple(v: &Q, origin: &Q, step: &Q) -> bool {
    ((v - origin) / step).is_integer()
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("floating-point literal {0:?} not allowed in an exact field")]
    Float(String),
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if s.contains(['.', 'e', 'E']) {
        return Err(ParseRationalError::Float(s.to_string()));
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    let d: BigInt = d.parse().map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    if d.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Q::new(n, d))
}

pub fn format_q(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn abs(v: &Q) -> Q {
    v.abs()
}

/// Serde adapter for a single exact rational stored as a `"p/q"` string.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = String::deserialize(d)?;
        parse_q(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for an optional exact rational.
pub mod serde_q_opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&format_q(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        raw.map(|r| parse_q(&r).map_err(serde::de::Error::custom)).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_q("-7").unwrap(), qi(-7));
        assert_eq!(format_q(&q(10, 4)), "5/2");
        assert_eq!(format_q(&qi(3)), "3");
    }

    #[test]
    fn floats_rejected() {
        assert!(matches!(parse_q("0.5"), Err(ParseRationalError::Float(_))));
        assert!(matches!(parse_q("1e3"), Err(ParseRationalError::Float(_))));
        assert!(matches!(parse_q("1/0"), Err(ParseRationalError::ZeroDenominator(_))));
        assert!(matches!(parse_q("x/2"), Err(ParseRationalError::Malformed(_))));
    }

    #[test]
    fn grid_rounding() {
        let step = q(1, 4);
        let o = qi(0);
        assert_eq!(floor_to(&q(3, 10), &o, &step), q(1, 4));
        assert_eq!(ceil_to(&q(3, 10), &o, &step), q(1, 2));
        assert_eq!(floor_to(&q(-1, 10), &o, &step), q(-1, 4));
        assert!(is_multiple(&q(3, 4), &o, &step));
        assert!(!is_multiple(&q(3, 8), &o, &step));
    }
}
