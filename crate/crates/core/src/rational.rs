//! Exact rational numbers and their `p/q` text form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The rational type used throughout the crate.
pub type Q = BigRational;

/// `p/q` as an exact rational.
pub fn q(p: i64, den: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(den))
}

/// An integer as a rational.
pub fn qi(p: i64) -> Q {
    Q::from_integer(BigInt::from(p))
}

/// Fractional part `x - floor(x)`, always in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

/// True when `2x` is an integer.
pub fn is_half_integer(x: &Q) -> bool {
    (x * qi(2)).is_integer()
}

/// The value as `u64` when it is a non-negative integer that fits.
pub fn to_u64(x: &Q) -> Option<u64> {
    if x.is_integer() && !x.is_negative() {
        x.to_integer().to_u64()
    } else {
        None
    }
}

/// `p/q` text, or just `p` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseQError(pub String);

/// Parses `p`, `p/q` or `-p/q`. Zero denominators are rejected.
pub fn parse_q(s: &str) -> Result<Q, ParseQError> {
    let t = s.trim();
    let bad = || ParseQError(s.to_string());
    match t.split_once('/') {
        None => BigInt::from_str(t).map(Q::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
    }
}

/// Serde adapters that write rationals as `p/q` strings.
pub mod serde_q {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&fmt_q(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_q(s).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(x) => s.serialize_some(&fmt_q(x)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
            let v = Option::<String>::deserialize(d)?;
            v.map(|s| parse_q(&s).map_err(D::Error::custom)).transpose()
        }
    }

    pub mod opt_vec {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<Vec<Q>>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(xs) => s.serialize_some(&xs.iter().map(fmt_q).collect::<Vec<_>>()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Q>>, D::Error> {
            let v = Option::<Vec<String>>::deserialize(d)?;
            v.map(|xs| {
                xs.iter()
                    .map(|s| parse_q(s).map_err(D::Error::custom))
                    .collect()
            })
            .transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_of_negative() {
        assert_eq!(frac(&q(-1, 4)), q(3, 4));
        assert_eq!(frac(&q(35, 12)), q(11, 12));
        assert_eq!(frac(&qi(3)), qi(0));
    }

    #[test]
    fn text_form() {
        assert_eq!(fmt_q(&q(10, 34)), "5/17");
        assert_eq!(fmt_q(&qi(-2)), "-2");
        assert_eq!(parse_q(" 5/17 ").unwrap(), q(5, 17));
        assert_eq!(parse_q("-3").unwrap(), qi(-3));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn half_integers() {
        assert!(is_half_integer(&q(9, 2)));
        assert!(!is_half_integer(&q(9, 4)));
        assert_eq!(to_u64(&qi(7)), Some(7));
        assert_eq!(to_u64(&q(7, 2)), None);
    }
}
