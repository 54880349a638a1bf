//! Sign patterns and their equivalence transformations.
//!
//! A sign pattern is a square matrix over `{+, -, 0}`; its qualitative class
//! is the set of real matrices whose entries match those signs. Two patterns
//! are treated as equivalent when one maps to the other by a composition of
//! signature similarity, permutation similarity, transposition, and
//! negation, each of which preserves the properties this crate certifies.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::rational::{sign_i8, Rational};

/// Entry of a sign pattern.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

impl Sign {
    pub fn from_char(c: char) -> Result<Sign> {
        match c {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            '0' => Ok(Sign::Zero),
            _ => Err(Error::Parse(format!("invalid sign character {c:?}"))),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Zero => '0',
        }
    }

    pub fn of(x: &Rational) -> Sign {
        match sign_i8(x) {
            1 => Sign::Plus,
            -1 => Sign::Minus,
            _ => Sign::Zero,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
        }
    }

    /// Sign product, with zero absorbing.
    pub fn times(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Plus,
            _ => Sign::Minus,
        }
    }
}

/// Square sign pattern of order `n`.
#[derive(Clone, PartialEq, Eq)]
pub struct SignPattern {
    n: usize,
    data: Vec<Sign>,
}

impl SignPattern {
    pub fn zeros(n: usize) -> Self {
        SignPattern {
            n,
            data: vec![Sign::Zero; n * n],
        }
    }

    /// Builds a pattern from string rows like `"+-0"`.
    pub fn from_rows(rows: &[&str]) -> Result<Self> {
        Self::parse_text(&rows.join("\n"))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn at(&self, r: usize, c: usize) -> Sign {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, s: Sign) {
        self.data[r * self.n + c] = s;
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), Sign)> + '_ {
        let n = self.n;
        self.data
            .iter()
            .enumerate()
            .map(move |(i, &s)| ((i / n, i % n), s))
    }

    pub fn nonzero_positions(&self) -> Vec<(usize, usize)> {
        self.entries()
            .filter(|(_, s)| !s.is_zero())
            .map(|(p, _)| p)
            .collect()
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|s| !s.is_zero()).count()
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &SignPattern) -> SignPattern {
        let n = self.n + other.n;
        let mut out = SignPattern::zeros(n);
        for ((r, c), s) in self.entries() {
            out.set(r, c, s);
        }
        for ((r, c), s) in other.entries() {
            out.set(self.n + r, self.n + c, s);
        }
        out
    }

    /// Parses rows of `+`, `-`, `0` characters, whitespace between entries
    /// optional. The row count must equal the row length.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<Sign>> = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row: Result<Vec<Sign>> = line
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(Sign::from_char)
                .collect();
            rows.push(row?);
        }
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "pattern must be square: {n} rows but a row of length {}",
                    row.len()
                )));
            }
        }
        Ok(SignPattern {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Compact text form: one row per line, no separators.
    pub fn to_text(&self) -> String {
        self.row_strings().join("\n")
    }

    fn row_strings(&self) -> Vec<String> {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.at(r, c).to_char()).collect())
            .collect()
    }

    /// Digraph irreducibility: the pattern is irreducible iff the digraph
    /// with an arc `i -> j` for every nonzero `(i, j)` entry is strongly
    /// connected. Order 1 is irreducible by convention.
    pub fn is_irreducible(&self) -> bool {
        let n = self.n;
        if n <= 1 {
            return true;
        }
        let reach = |forward: bool| -> usize {
            let mut seen = vec![false; n];
            let mut stack = vec![0usize];
            seen[0] = true;
            let mut count = 1;
            while let Some(v) = stack.pop() {
                for w in 0..n {
                    let edge = if forward {
                        !self.at(v, w).is_zero()
                    } else {
                        !self.at(w, v).is_zero()
                    };
                    if edge && !seen[w] {
                        seen[w] = true;
                        count += 1;
                        stack.push(w);
                    }
                }
            }
            count
        };
        reach(true) == n && reach(false) == n
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignPattern(order {})\n{}", self.n, self.to_text())
    }
}

impl Serialize for SignPattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: usize,
            rows: Vec<String>,
        }
        Repr {
            n: self.n,
            rows: self.row_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignPattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            rows: Vec<String>,
        }
        let repr = Repr::deserialize(d)?;
        if repr.rows.len() != repr.n {
            return Err(D::Error::custom("row count does not match n"));
        }
        let p = SignPattern::parse_text(&repr.rows.join("\n")).map_err(D::Error::custom)?;
        if p.order() != repr.n {
            return Err(D::Error::custom("row length does not match n"));
        }
        Ok(p)
    }
}

/// Entrywise sign of a square rational matrix.
pub fn sign_of(a: &RationalMatrix) -> Result<SignPattern> {
    let n = a.order()?;
    let mut p = SignPattern::zeros(n);
    for ((r, c), x) in a.entries() {
        p.set(r, c, Sign::of(x));
    }
    Ok(p)
}

/// Whether `a` lies in the qualitative class of `pattern`.
pub fn is_realization(a: &RationalMatrix, pattern: &SignPattern) -> Result<bool> {
    let n = a.order()?;
    if n != pattern.order() {
        return Err(Error::Dimension(format!(
            "matrix order {n} vs pattern order {}",
            pattern.order()
        )));
    }
    Ok(&sign_of(a)? == pattern)
}

/// Whether `sup` is obtained from `sub` by replacing zero entries with
/// nonzeros: the two agree at every nonzero position of `sub`.
pub fn is_superpattern(sup: &SignPattern, sub: &SignPattern) -> Result<bool> {
    if sup.order() != sub.order() {
        return Err(Error::Dimension(format!(
            "pattern orders {} vs {}",
            sup.order(),
            sub.order()
        )));
    }
    Ok(sub
        .entries()
        .all(|((r, c), s)| s.is_zero() || sup.at(r, c) == s))
}

/// An equivalence transformation. Applied in the fixed order: signature
/// similarity, then permutation similarity, then optional transposition,
/// then optional negation.
///
/// `permutation[i]` is the image of index `i`, so the permutation step
/// moves entry `(i, j)` to `(permutation[i], permutation[j])`. Signature
/// entries are `+1` or `-1`; a global signature flip acts trivially, so
/// canonical transforms fix `signature[0] = +1`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Transform {
    pub signature: Vec<i8>,
    pub permutation: Vec<usize>,
    pub transpose: bool,
    pub negate: bool,
}

impl Transform {
    pub fn identity(n: usize) -> Self {
        Transform {
            signature: vec![1; n],
            permutation: (0..n).collect(),
            transpose: false,
            negate: false,
        }
    }

    pub fn order(&self) -> usize {
        self.permutation.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.order();
        if self.signature.len() != n {
            return Err(Error::Dimension(format!(
                "signature length {} vs permutation length {n}",
                self.signature.len()
            )));
        }
        if self.signature.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Parse("signature entries must be +1 or -1".into()));
        }
        let mut seen = vec![false; n];
        for &p in &self.permutation {
            if p >= n || seen[p] {
                return Err(Error::Parse("permutation is not a bijection".into()));
            }
            seen[p] = true;
        }
        Ok(())
    }

    /// Normalizes to the canonical representative with `signature[0] = +1`;
    /// the action is unchanged because a global signature flip cancels in
    /// the similarity.
    pub fn canonicalize(mut self) -> Self {
        if self.signature.first() == Some(&-1) {
            for s in &mut self.signature {
                *s = -*s;
            }
        }
        self
    }

    /// The transform whose application undoes this one.
    pub fn inverse(&self) -> Self {
        let n = self.order();
        let mut perm_inv = vec![0usize; n];
        for (i, &p) in self.permutation.iter().enumerate() {
            perm_inv[p] = i;
        }
        let signature = (0..n).map(|j| self.signature[perm_inv[j]]).collect();
        Transform {
            signature,
            permutation: perm_inv,
            transpose: self.transpose,
            negate: self.negate,
        }
        .canonicalize()
    }

    /// The single transform acting as `self` followed by `then`.
    pub fn compose(&self, then: &Transform) -> Result<Self> {
        let n = self.order();
        if then.order() != n {
            return Err(Error::Dimension(format!(
                "transform orders {n} vs {}",
                then.order()
            )));
        }
        let permutation: Vec<usize> = (0..n).map(|i| then.permutation[self.permutation[i]]).collect();
        let signature: Vec<i8> = (0..n)
            .map(|i| self.signature[i] * then.signature[self.permutation[i]])
            .collect();
        Ok(Transform {
            signature,
            permutation,
            transpose: self.transpose ^ then.transpose,
            negate: self.negate ^ then.negate,
        }
        .canonicalize())
    }
}

/// Applies a transform to a sign pattern.
pub fn apply_transform(p: &SignPattern, t: &Transform) -> Result<SignPattern> {
    t.validate()?;
    let n = p.order();
    if t.order() != n {
        return Err(Error::Dimension(format!(
            "pattern order {n} vs transform order {}",
            t.order()
        )));
    }
    let mut out = SignPattern::zeros(n);
    for ((i, j), s) in p.entries() {
        let mut s = s;
        if t.signature[i] * t.signature[j] < 0 {
            s = s.negate();
        }
        out.set(t.permutation[i], t.permutation[j], s);
    }
    if t.transpose {
        let mut tr = SignPattern::zeros(n);
        for ((i, j), s) in out.entries() {
            tr.set(j, i, s);
        }
        out = tr;
    }
    if t.negate {
        for s in &mut out.data {
            *s = s.negate();
        }
    }
    Ok(out)
}

/// Applies the same transform at the matrix level; the result realizes the
/// transformed pattern and, except under negation, has the same
/// characteristic polynomial.
pub fn apply_transform_matrix(a: &RationalMatrix, t: &Transform) -> Result<RationalMatrix> {
    t.validate()?;
    let n = a.order()?;
    if t.order() != n {
        return Err(Error::Dimension(format!(
            "matrix order {n} vs transform order {}",
            t.order()
        )));
    }
    let mut out = RationalMatrix::zeros(n, n);
    for ((i, j), x) in a.entries() {
        let mut x = x.clone();
        if t.signature[i] * t.signature[j] < 0 {
            x = -x;
        }
        out.set(t.permutation[i], t.permutation[j], x);
    }
    if t.transpose {
        out = out.transpose();
    }
    if t.negate {
        out = out.neg();
    }
    Ok(out)
}

/// Order bound for the exhaustive equivalence search.
pub const EQUIVALENCE_ORDER_BOUND: usize = 7;

/// Searches for a transform carrying `p` to `q`, exhaustively over all
/// `2 * 2 * n! * 2^(n-1)` canonical candidates. Deterministic: candidates
/// are tried with negation in the outermost loop (`false` first), then
/// transposition (`false` first), then permutations in lexicographic order,
/// then signatures in binary counting order with `signature[0]` pinned to
/// `+1`; the first match is returned. Patterns of different orders are
/// never equivalent, so the answer is `None` for those.
pub fn equivalent(p: &SignPattern, q: &SignPattern) -> Result<Option<Transform>> {
    let n = p.order();
    if q.order() != n {
        return Ok(None);
    }
    if n > EQUIVALENCE_ORDER_BOUND {
        return Err(Error::CapabilityExceeded(format!(
            "equivalence search supports order <= {EQUIVALENCE_ORDER_BOUND}, got {n}"
        )));
    }
    if n == 0 {
        return Ok(Some(Transform::identity(0)));
    }
    let perms = lexicographic_permutations(n);
    let sig_count = 1usize << (n - 1);
    for negate in [false, true] {
        for transpose in [false, true] {
            // undo the outer negation/transposition on q once, so the inner
            // loops only compare against the signature-permutation image
            let mut target = q.clone();
            if negate {
                for s in &mut target.data {
                    *s = s.negate();
                }
            }
            if transpose {
                let mut tr = SignPattern::zeros(n);
                for ((i, j), s) in target.entries() {
                    tr.set(j, i, s);
                }
                target = tr;
            }
            for perm in &perms {
                for bits in 0..sig_count {
                    if matches_under(p, &target, perm, bits) {
                        let signature = signature_from_bits(n, bits);
                        return Ok(Some(Transform {
                            signature,
                            permutation: perm.clone(),
                            transpose,
                            negate,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn signature_from_bits(n: usize, bits: usize) -> Vec<i8> {
    (0..n)
        .map(|i| {
            if i > 0 && bits >> (i - 1) & 1 == 1 {
                -1
            } else {
                1
            }
        })
        .collect()
}

fn matches_under(p: &SignPattern, target: &SignPattern, perm: &[usize], bits: usize) -> bool {
    let n = p.order();
    let sig = |i: usize| i > 0 && bits >> (i - 1) & 1 == 1;
    for i in 0..n {
        for j in 0..n {
            let mut s = p.at(i, j);
            if sig(i) ^ sig(j) {
                s = s.negate();
            }
            if target.at(perm[i], perm[j]) != s {
                return false;
            }
        }
    }
    true
}

fn lexicographic_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                current.push(v);
                rec(n, current, used, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}
