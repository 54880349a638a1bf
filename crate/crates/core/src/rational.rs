//! Scalar arithmetic for the exact lane.
//!
//! All exact computation in this crate runs over arbitrary-precision
//! rationals. The scalar type is re-exported from `num-rational`, which
//! keeps every value in lowest terms with a positive denominator, so two
//! equal rationals always compare equal structurally.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Exact rational scalar: arbitrary-precision numerator and denominator,
/// always reduced, denominator always positive.
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for a rational fraction `n/d`. Panics if `d == 0`; intended for
/// literals in code, not for input handling (use [`parse_rational`] there).
pub fn ratio(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator in rational literal");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest f64 to the exact value.
pub(crate) fn rational_to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p`, `p/q`, or `-p/q` into a rational. Rejects a zero denominator
/// rather than panicking, which makes it safe on untrusted input.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = |t: &str| Error::Parse(format!("invalid rational entry {t:?}"));
    match text.split_once('/') {
        None => {
            let n = BigInt::from_str(text).map_err(|_| bad(text))?;
            Ok(Rational::from_integer(n))
        }
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad(text))?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad(text))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Formats a rational as `p` or `p/q` with `q > 0`, matching the text
/// format accepted by [`parse_rational`].
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Sign of a rational as -1, 0, or +1.
pub fn sign_i8(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Serde adapter serializing a [`Rational`] as its exact text form.
pub mod rational_string {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(de::Error::custom)
    }
}

/// Serde adapter serializing a vector of rationals as exact text forms.
pub mod rational_vec_string {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|x| format_rational(x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(de::Error::custom))
            .collect()
    }
}
