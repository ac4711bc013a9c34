//! Exact fractions as `"p/q"` strings in JSON.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use std::str::FromStr;

pub fn parse_rational64(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a fraction: `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(p, q))
        }
        None => s.parse::<i64>().map(Rational64::from_integer).map_err(|_| bad()),
    }
}

pub fn parse_big(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a fraction: `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| bad()),
    }
}

/// `serde(with = "crate::rational::r64")`
pub mod r64 {
    use num_rational::Rational64;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational64(&s).map_err(D::Error::custom)
    }
}

/// `serde(with = "crate::rational::big")`
pub mod big {
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_big(&s).map_err(D::Error::custom)
    }
}

/// `serde(with = "crate::rational::big_vec")`
pub mod big_vec {
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| super::parse_big(s).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions() {
        assert_eq!(parse_rational64("3/6").unwrap(), Rational64::new(1, 2));
        assert_eq!(parse_rational64("-4").unwrap(), Rational64::from_integer(-4));
        assert!(parse_rational64("1/0").is_err());
        assert_eq!(parse_big("2/3").unwrap().to_string(), "2/3");
    }
}
