//! Exact rationals and their string form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

use crate::error::CyError;

pub type Q = BigRational;

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Parses `"3"`, `"-1/4"` or `" 2 / 6 "`.
pub fn parse_q(s: &str) -> Result<Q, CyError> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    Q::from_str(&cleaned).map_err(|_| CyError::Parse(format!("not a rational: {s:?}")))
}

/// Canonical text: `"n/d"` with the denominator dropped when it is 1.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// True for 0, -1, -2, ...
pub fn is_nonpositive_integer(x: &Q) -> bool {
    is_integer(x) && !x.is_positive()
}

/// `x^e` for a machine exponent, negative allowed for nonzero `x`.
pub fn qpow(x: &Q, e: i64) -> Q {
    let mut base = if e < 0 { x.recip() } else { x.clone() };
    let mut n = e.unsigned_abs();
    let mut acc = one();
    while n > 0 {
        if n & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        n >>= 1;
    }
    acc
}

pub fn binomial(n: usize, k: usize) -> Q {
    if k > n {
        return zero();
    }
    let mut acc = one();
    for i in 0..k {
        acc = acc * qi((n - i) as i64) / qi((i + 1) as i64);
    }
    acc
}

/// Serde adapter storing a rational as its canonical string.
pub mod as_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Q>`.
pub mod vec_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(fmt_q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_q(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["0", "3", "-1/4", "7/12"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(parse_q(" 2 / 6 ").unwrap(), q(1, 3));
        assert!(parse_q("1/0x").is_err());
    }

    #[test]
    fn canonical_zero_and_sign() {
        let z = q(0, -5);
        assert_eq!(fmt_q(&z), "0");
        let x = q(3, -6);
        assert_eq!(fmt_q(&x), "-1/2");
        assert!(x.denom().is_positive());
    }

    #[test]
    fn powers_and_binomials() {
        assert_eq!(qpow(&q(2, 3), 3), q(8, 27));
        assert_eq!(qpow(&q(2, 3), -2), q(9, 4));
        assert_eq!(binomial(5, 2), qi(10));
        assert_eq!(binomial(2, 5), qi(0));
    }
}
