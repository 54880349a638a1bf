//! Dense matrices over exact rationals.
//!
//! Sizes here are desk scale (orders up to the low teens), so the layout is
//! a plain row-major `Vec` and the algorithms favor exactness over asymptotic
//! cleverness. Determinants go through fraction-free Bareiss elimination on
//! an integer-scaled copy; rank uses rational Gaussian elimination, which
//! stays reduced because every scalar is kept in lowest terms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows of rationals. Rows must all have the same
    /// length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {ncols}",
                    r.len()
                )));
            }
        }
        Ok(RationalMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from integer rows; convenient for fixed test data.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&x| crate::rational::rat(x)).collect())
            .collect();
        Self::from_rows(data).expect("integer rows are rectangular")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Order of a square matrix; errors on rectangular input.
    pub fn order(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Rational)> {
        let cols = self.cols;
        self.data
            .iter()
            .enumerate()
            .map(move |(i, x)| ((i / cols, i % cols), x))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for ((r, c), x) in self.entries() {
            t.set(c, r, x.clone());
        }
        t
    }

    pub fn trace(&self) -> Rational {
        let n = self.rows.min(self.cols);
        (0..n).map(|i| self.at(i, i).clone()).sum()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let cur = out.at(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for ((r, c), x) in other.entries() {
            let cur = out.at(r, c) + x;
            out.set(r, c, cur);
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let mut out = self.clone();
        for x in &mut out.data {
            *x = &*x * factor;
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// `self + c * I` on a square matrix.
    pub fn add_diag(&self, c: &Rational) -> Result<Self> {
        let n = self.order()?;
        let mut out = self.clone();
        for i in 0..n {
            let cur = out.at(i, i) + c;
            out.set(i, i, cur);
        }
        Ok(out)
    }

    /// Block diagonal sum of two square matrices.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let n = self.order()?;
        let m = other.order()?;
        let mut out = Self::zeros(n + m, n + m);
        for ((r, c), x) in self.entries() {
            out.set(r, c, x.clone());
        }
        for ((r, c), x) in other.entries() {
            out.set(n + r, n + c, x.clone());
        }
        Ok(out)
    }

    /// Deletes the listed rows and columns (set semantics: duplicates are
    /// collapsed). Deleting every row of a square matrix leaves the empty
    /// 0x0 matrix, whose determinant is 1.
    pub fn minor_matrix(&self, delete_rows: &[usize], delete_cols: &[usize]) -> Result<Self> {
        let mut dr: Vec<usize> = delete_rows.to_vec();
        let mut dc: Vec<usize> = delete_cols.to_vec();
        dr.sort_unstable();
        dr.dedup();
        dc.sort_unstable();
        dc.dedup();
        if let Some(&r) = dr.iter().find(|&&r| r >= self.rows) {
            return Err(Error::IndexOutOfRange {
                index: r,
                order: self.rows,
            });
        }
        if let Some(&c) = dc.iter().find(|&&c| c >= self.cols) {
            return Err(Error::IndexOutOfRange {
                index: c,
                order: self.cols,
            });
        }
        let keep_rows: Vec<usize> = (0..self.rows).filter(|r| !dr.contains(r)).collect();
        let keep_cols: Vec<usize> = (0..self.cols).filter(|c| !dc.contains(c)).collect();
        let mut out = Self::zeros(keep_rows.len(), keep_cols.len());
        for (i, &r) in keep_rows.iter().enumerate() {
            for (j, &c) in keep_cols.iter().enumerate() {
                out.set(i, j, self.at(r, c).clone());
            }
        }
        Ok(out)
    }

    /// Deletes a single row and column.
    pub fn minor(&self, row: usize, col: usize) -> Result<Self> {
        self.minor_matrix(&[row], &[col])
    }

    /// Exact determinant by fraction-free elimination.
    ///
    /// Each row is first scaled by the least common multiple of its
    /// denominators, reducing the problem to an integer matrix; Bareiss
    /// one-step elimination then keeps every intermediate value an exact
    /// minor of that integer matrix, and the accumulated row scales divide
    /// back out at the end. The empty 0x0 determinant is 1.
    pub fn det(&self) -> Result<Rational> {
        let n = self.order()?;
        if n == 0 {
            return Ok(Rational::one());
        }
        let (mut m, scale) = self.integer_scaled();
        let mut sign = 1i8;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(Rational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    debug_assert!((&num % &prev).is_zero());
                    m[i][j] = num / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let mut det_scaled = m[n - 1][n - 1].clone();
        if sign < 0 {
            det_scaled = -det_scaled;
        }
        Ok(Rational::new(det_scaled, scale))
    }

    /// Exact rank of an arbitrary rectangular matrix, by Gaussian
    /// elimination over the rationals (entries stay in lowest terms).
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Rational>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c).clone()).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            for r in rank + 1..self.rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] / &m[rank][col];
                for c in col..self.cols {
                    let x = &m[r][c] - &factor * &m[rank][c];
                    m[r][c] = x;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Scales each row to integers; returns the integer matrix and the
    /// product of the (positive) row scale factors.
    fn integer_scaled(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut l = BigInt::one();
            for c in 0..self.cols {
                l = l.lcm(self.at(r, c).denom());
            }
            let row: Vec<BigInt> = (0..self.cols)
                .map(|c| {
                    let x = self.at(r, c);
                    x.numer() * (&l / x.denom())
                })
                .collect();
            scale *= &l;
            out.push(row);
        }
        (out, scale)
    }

    /// Parses the plain text format: one row per line, entries separated by
    /// whitespace, each entry an integer or `p/q`. Blank lines and `#`
    /// comments are skipped. Ragged rows and zero denominators are rejected.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row: Result<Vec<Rational>> =
                line.split_whitespace().map(parse_rational).collect();
            rows.push(row?);
        }
        let widths: Vec<usize> = rows.iter().map(Vec::len).collect();
        if let Some(w) = widths.iter().find(|&&w| w != widths[0]) {
            return Err(Error::Parse(format!(
                "ragged rows: {} vs {} entries",
                widths[0], w
            )));
        }
        Self::from_rows(rows)
    }

    /// Canonical text form: entries joined by single spaces, rows by
    /// newlines, no trailing newline. Round-trips through [`parse_text`].
    pub fn to_text(&self) -> String {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| format_rational(self.at(r, c)))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Column-aligned text for human-facing output; still parseable.
    pub fn to_aligned_text(&self) -> String {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| format_rational(self.at(r, c)))
                    .collect()
            })
            .collect();
        let mut widths = vec![0usize; self.cols];
        for row in &cells {
            for (c, cell) in row.iter().enumerate() {
                widths[c] = widths[c].max(cell.len());
            }
        }
        cells
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(c, cell)| format!("{cell:>w$}", w = widths[c]))
                    .collect::<Vec<_>>()
                    .join("  ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;

    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        self.at(r, c)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMatrix({}x{})\n{}", self.rows, self.cols, self.to_text())
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| format_rational(self.at(r, c)))
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let parsed: Result<Vec<Vec<Rational>>> = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect())
            .collect();
        RationalMatrix::from_rows(parsed.map_err(D::Error::custom)?).map_err(D::Error::custom)
    }
}
