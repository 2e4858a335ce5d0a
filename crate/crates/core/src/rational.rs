//! Exact rational scalars and their `"p/q"` string encoding.
//!
//! Every coefficient in this crate is a [`Rational`]: arbitrary-precision
//! numerator, positive arbitrary-precision denominator, always reduced.
//! [`num_rational::BigRational`] maintains exactly that invariant, so we
//! use it directly and only add parsing, formatting and serde glue.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

pub use num_rational::BigRational as Rational;

/// Shorthand for `Rational::new(n, d)` from machine integers.
///
/// Panics if `d == 0`, like `BigRational::new`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Integer power with negative exponents allowed (base must be nonzero then).
pub fn rat_pow(base: &Rational, exp: i64) -> Rational {
    if exp == 0 {
        return rat_int(1);
    }
    let mut e = exp.unsigned_abs();
    let mut b = base.clone();
    let mut acc = rat_int(1);
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    if exp < 0 {
        rat_int(1) / acc
    } else {
        acc
    }
}

/// Error from [`parse_rational`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    input: String,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}, expected \"p\" or \"p/q\"", self.input)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parse `"p/q"` or `"p"` into a reduced rational. Rejects zero denominators.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError { input: s.to_owned() };
    let t = s.trim();
    let (num_str, den_str) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num_str.parse().map_err(|_| err())?;
    let den: BigInt = den_str.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Convert to `f64`, shifting oversized numerator/denominator in lockstep so
/// the quotient stays meaningful instead of collapsing to `inf/inf`.
pub fn rational_to_f64(r: &Rational) -> f64 {
    let nb = r.numer().bits();
    let db = r.denom().bits();
    let excess = nb.max(db).saturating_sub(1000);
    if excess == 0 {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        return n / d;
    }
    let n = (r.numer() >> excess).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> excess).to_f64().unwrap_or(f64::NAN);
    let sign = if r.is_negative() && n == 0.0 { -1.0 } else { 1.0 };
    sign * (n / d)
}

/// Serde adapter storing a `Rational` as its `"p/q"` string.
pub mod rat_string {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>` as a sequence of `"p/q"` strings.
pub mod rat_vec_string {
    use super::{parse_rational, Rational};
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
