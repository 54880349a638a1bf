//! Exact characteristic polynomials.
//!
//! The primary route is the Faddeev–LeVerrier recurrence, which needs only
//! matrix products and exact division by small integers. An independent
//! route, evaluating `det(zI - A)` at integer nodes and interpolating, is
//! exposed as [`RationalMatrix::char_poly_via_interpolation`] so tests can
//! cross-check the two, and its interpolation core is reused wherever a
//! determinant that is polynomial in `z` has to be recovered exactly.

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::Result;
use crate::matrix::RationalMatrix;
use crate::rational::{format_rational, parse_rational, rat, Rational};

/// Monic characteristic polynomial `z^n + f_1 z^(n-1) + ... + f_n` of an
/// order-`n` matrix, stored as the coefficient list `[f_1, ..., f_n]`.
#[derive(Clone, PartialEq, Eq)]
pub struct CharPoly {
    order: usize,
    coeffs: Vec<Rational>,
}

impl CharPoly {
    pub fn new(order: usize, coeffs: Vec<Rational>) -> Self {
        assert_eq!(coeffs.len(), order, "need one coefficient per degree");
        CharPoly { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The non-leading coefficients `[f_1, ..., f_n]`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// True when every coefficient vanishes, i.e. the polynomial is `z^n`.
    pub fn is_power_of_z(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// Multiplicity of the root 0: the number of trailing coefficients
    /// `f_n, f_(n-1), ...` that are zero.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs
            .iter()
            .rev()
            .take_while(|c| c.is_zero())
            .count()
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, z: &Rational) -> Rational {
        let mut acc = Rational::one();
        for c in &self.coeffs {
            acc = acc * z + c;
        }
        acc
    }

    /// All coefficients in ascending-power order `[f_n, ..., f_1, 1]`.
    pub fn monomial_coeffs(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.coeffs.iter().rev().cloned().collect();
        out.push(Rational::one());
        out
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 0 {
            return f.write_str("1");
        }
        write!(f, "{}", power_of_z(self.order))?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = self.order - 1 - i;
            let (sign, mag) = if c < &Rational::zero() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            write!(f, " {sign} ")?;
            if power == 0 {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", power_of_z(power))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), power_of_z(power))?;
            }
        }
        Ok(())
    }
}

fn power_of_z(p: usize) -> String {
    match p {
        1 => "z".to_string(),
        _ => format!("z^{p}"),
    }
}

impl fmt::Debug for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharPoly({self})")
    }
}

impl Serialize for CharPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            order: usize,
            coeffs: Vec<&'a str>,
        }
        let strings: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        Repr {
            order: self.order,
            coeffs: strings.iter().map(String::as_str).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CharPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            order: usize,
            coeffs: Vec<String>,
        }
        let repr = Repr::deserialize(d)?;
        if repr.coeffs.len() != repr.order {
            return Err(D::Error::custom("coefficient count does not match order"));
        }
        let coeffs: Result<Vec<Rational>> =
            repr.coeffs.iter().map(|s| parse_rational(s)).collect();
        Ok(CharPoly::new(repr.order, coeffs.map_err(D::Error::custom)?))
    }
}

impl RationalMatrix {
    /// Characteristic polynomial of `zI - self` by the Faddeev–LeVerrier
    /// recurrence. Exact: the only divisions are by the step index, which is
    /// always exact over the rationals.
    pub fn char_poly(&self) -> Result<CharPoly> {
        let n = self.order()?;
        let mut coeffs = Vec::with_capacity(n);
        let mut aux = RationalMatrix::identity(n);
        for k in 1..=n {
            let m = self.mul(&aux)?;
            let c = -m.trace() / rat(k as i64);
            aux = m.add_diag(&c)?;
            coeffs.push(c);
        }
        debug_assert!(aux.is_zero(), "Cayley-Hamilton closure failed");
        Ok(CharPoly::new(n, coeffs))
    }

    /// Characteristic polynomial by evaluating `det(zI - A)` at the integer
    /// nodes `0..=n` and interpolating. Independent of [`Self::char_poly`];
    /// kept as a cross-check oracle.
    pub fn char_poly_via_interpolation(&self) -> Result<CharPoly> {
        let n = self.order()?;
        let nodes: Vec<Rational> = (0..=n as i64).map(rat).collect();
        let values: Result<Vec<Rational>> = nodes
            .iter()
            .map(|z| {
                let shifted = self.neg().add_diag(z)?;
                shifted.det()
            })
            .collect();
        let mono = newton_interpolate(&nodes, &values?);
        debug_assert_eq!(mono.len(), n + 1);
        debug_assert!(mono[n].is_one(), "leading coefficient must be 1");
        let coeffs = mono[..n].iter().rev().cloned().collect();
        Ok(CharPoly::new(n, coeffs))
    }

    /// True when the characteristic polynomial is `z^n`.
    pub fn is_nilpotent(&self) -> Result<bool> {
        Ok(self.char_poly()?.is_power_of_z())
    }

    /// Smallest `k` with `self^k = 0`, or `None` when the matrix is not
    /// nilpotent. A nilpotent matrix of order `n` always answers within `n`
    /// powers.
    pub fn index_of_nilpotency(&self) -> Result<Option<usize>> {
        let n = self.order()?;
        if n == 0 {
            return Ok(Some(0));
        }
        let mut power = self.clone();
        for k in 1..=n {
            if power.is_zero() {
                return Ok(Some(k));
            }
            if k < n {
                power = power.mul(self)?;
            }
        }
        Ok(None)
    }
}

/// Interpolates the unique polynomial of degree `< xs.len()` through the
/// given points, returned in ascending-power order. Nodes must be distinct;
/// all arithmetic is exact.
pub(crate) fn newton_interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let n = xs.len();
    assert_eq!(n, ys.len());
    if n == 0 {
        return Vec::new();
    }
    // divided differences, in place
    let mut dd: Vec<Rational> = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = &xs[i] - &xs[i - level];
            dd[i] = num / den;
        }
    }
    // expand the Newton form into monomial coefficients
    let mut result = vec![Rational::zero(); n];
    let mut basis = vec![Rational::one()];
    for (k, coeff) in dd.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            let updated = &result[i] + coeff * b;
            result[i] = updated;
        }
        if k + 1 < n {
            basis = poly_mul_linear(&basis, &xs[k]);
        }
    }
    result
}

/// Multiplies an ascending-power polynomial by `(z - root)`.
fn poly_mul_linear(poly: &[Rational], root: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); poly.len() + 1];
    for (i, c) in poly.iter().enumerate() {
        out[i + 1] = &out[i + 1] + c;
        out[i] = &out[i] - &(c * root);
    }
    out
}

/// Evaluates an ascending-power polynomial exactly.
#[cfg(test)]
pub(crate) fn poly_eval(poly: &[Rational], z: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in poly.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Strips trailing (high-power) zero coefficients.
pub(crate) fn poly_trim(mut poly: Vec<Rational>) -> Vec<Rational> {
    while poly.last().is_some_and(Rational::is_zero) {
        poly.pop();
    }
    poly
}

/// Formal derivative of an ascending-power polynomial.
pub(crate) fn poly_derivative(poly: &[Rational]) -> Vec<Rational> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * rat(i as i64))
        .collect()
}

/// Monic greatest common divisor of two ascending-power polynomials, by the
/// Euclidean algorithm over the rationals. Returns `[1]` for coprime inputs
/// and the zero-length vector only when both inputs are zero.
pub(crate) fn poly_gcd_monic(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut a = poly_trim(a.to_vec());
    let mut b = poly_trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        for c in &mut a {
            *c = &*c / &lead;
        }
    }
    a
}

/// Remainder of polynomial division, ascending-power order, divisor nonzero.
fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db {
        let k = r.len() - 1;
        let factor = &r[k] / lead;
        if !factor.is_zero() {
            for i in 0..db {
                let updated = &r[k - db + i] - &(&factor * &b[i]);
                r[k - db + i] = updated;
            }
        }
        r.pop();
        r = poly_trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}
