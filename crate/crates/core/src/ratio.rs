//! Exact rational helpers: parsing and printing `"p/q"` strings, exact
//! rational powers and roots, and decimal rendering for approximate output.

use std::fmt::Write as _;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Largest exponent numerator or denominator accepted by [`pow_exact`].
pub const MAX_EXPONENT_PART: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatioError {
    #[error("cannot parse {0:?} as a rational (expected \"p/q\" or an integer)")]
    Parse(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"p/q"`, `"p"` or a signed integer string.
pub fn parse(s: &str) -> Result<Rational, RatioError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| RatioError::Parse(s.to_owned()))?;
    let den: BigInt = den.parse().map_err(|_| RatioError::Parse(s.to_owned()))?;
    if den.is_zero() {
        return Err(RatioError::ZeroDenominator(s.to_owned()));
    }
    Ok(Rational::new(num, den))
}

/// Parses a comma separated list such as `1,1/2,3`.
pub fn parse_list(s: &str) -> Result<Vec<Rational>, RatioError> {
    s.split(',').map(parse).collect()
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact `k`-th root of a nonnegative integer, if one exists.
fn int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact `k`-th root of a nonnegative rational, if it is rational.
pub fn root_exact(x: &Rational, k: u32) -> Option<Rational> {
    if k == 0 || x.is_negative() {
        return None;
    }
    if k == 1 {
        return Some(x.clone());
    }
    let n = int_root(x.numer(), k)?;
    let d = int_root(x.denom(), k)?;
    Some(Rational::new(n, d))
}

/// Splits a positive rational exponent into `(numerator, denominator)` as
/// machine integers, refusing exponents that are too large to expand.
pub fn exponent_parts(p: &Rational) -> Option<(u32, u32)> {
    let a = p.numer().to_u32()?;
    let b = p.denom().to_u32()?;
    (a <= MAX_EXPONENT_PART && b <= MAX_EXPONENT_PART).then_some((a, b))
}

/// `x^p` for `x >= 0` and rational `p > 0`, or `None` when the result is
/// irrational (or the exponent is too large to expand exactly).
pub fn pow_exact(x: &Rational, p: &Rational) -> Option<Rational> {
    if x.is_zero() {
        return Some(Rational::zero());
    }
    if p.is_negative() {
        let inv = pow_exact(x, &-p)?;
        return Some(inv.recip());
    }
    let (a, b) = exponent_parts(p)?;
    let root = root_exact(x, b)?;
    Some(num_traits::pow(root, a as usize))
}

/// Integer power of two as a rational (negative exponents allowed).
pub fn pow2(e: i64) -> Rational {
    let m = Rational::from_integer(BigInt::one() << e.unsigned_abs());
    if e >= 0 {
        m
    } else {
        m.recip()
    }
}

/// Decimal rendering rounded half away from zero to `digits` fractional
/// digits. Approximate by construction; only for `--approx` output.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r.numer().abs() * &scale;
    let (mut q, rem) = scaled.div_rem(r.denom());
    if rem * 2 >= *r.denom() {
        q += 1;
    }
    let (int_part, frac_part) = q.div_rem(&scale);
    let mut out = String::new();
    if r.is_negative() && !q.is_zero() {
        out.push('-');
    }
    write!(out, "{int_part}").unwrap();
    if digits > 0 {
        write!(out, ".{:0>width$}", frac_part.to_string(), width = digits).unwrap();
    }
    out
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter storing a [`Rational`] as its `"p/q"` string.
pub mod serde_str {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = RatString::deserialize(d)?;
        parse(&raw.0).map_err(de::Error::custom)
    }

    /// Accepts JSON strings, and bare integers as shorthand.
    struct RatString(String);

    impl<'de> Deserialize<'de> for RatString {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            struct V;
            impl de::Visitor<'_> for V {
                type Value = RatString;
                fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                    f.write_str("a rational as \"p/q\" string or integer")
                }
                fn visit_str<E: de::Error>(self, v: &str) -> Result<RatString, E> {
                    Ok(RatString(v.to_owned()))
                }
                fn visit_i64<E: de::Error>(self, v: i64) -> Result<RatString, E> {
                    Ok(RatString(v.to_string()))
                }
                fn visit_u64<E: de::Error>(self, v: u64) -> Result<RatString, E> {
                    Ok(RatString(v.to_string()))
                }
            }
            d.deserialize_any(V)
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let raw = Vec::<RatString>::deserialize(d)?;
            raw.iter()
                .map(|r| parse(&r.0).map_err(de::Error::custom))
                .collect()
        }
    }
}
