//! Bordering constructions that grow a certified matrix by one order.
//!
//! All three constructions share one shape: given an n x n matrix A and
//! vectors x, z of length n, the bordered matrix
//!
//! ```text
//! B = [ A - z x^T          z     ]
//!     [ x^T (A - z x^T)    x^T z ]
//! ```
//!
//! satisfies p_B(t) = t * p_A(t), so nilpotency is preserved. The equal
//! index construction takes x = a_kk e_k and z = e_k; the unequal one takes
//! x = b e_k and z = e_j with j != k. Precondition reports for both, plus a
//! recursion driver that advances the border row to the new last row each
//! round, re-certifies every intermediate, and records provenance that can
//! be replayed.

use serde::{Deserialize, Serialize};

use crate::certify::{
    certify_nilpotent_jacobian, find_full_rank_placement, VariablePlacement,
};
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::pattern::sign_of;
use crate::rational::{rational_string, rational_vec_string, Rational};
use num_traits::{One, Zero};

/// One bordering operation. `v` is carried only for precondition checking
/// and never affects the constructed matrix. All indices are 0-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BorderStep {
    General {
        #[serde(with = "rational_vec_string")]
        x: Vec<Rational>,
        #[serde(with = "rational_vec_string")]
        z: Vec<Rational>,
    },
    EqualIndex {
        k: usize,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        v: Option<usize>,
    },
    UnequalIndex {
        j: usize,
        k: usize,
        #[serde(with = "rational_string")]
        b: Rational,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        v: Option<usize>,
    },
}

/// Certification summary for the matrix produced by one recursion round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundSummary {
    pub order: usize,
    pub nilpotent: bool,
    pub jacobian_rank: usize,
    pub full_rank: bool,
}

/// Replayable record of a recursive bordering run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BorderProvenance {
    pub base: RationalMatrix,
    pub steps: Vec<BorderStep>,
    pub rounds: Vec<RoundSummary>,
}

impl BorderProvenance {
    /// Applies the recorded steps to the recorded base; the result must
    /// equal the matrix the recursion originally produced.
    pub fn replay(&self) -> Result<RationalMatrix> {
        let mut current = self.base.clone();
        for step in &self.steps {
            current = apply_border_step(&current, step)?;
        }
        Ok(current)
    }
}

/// The general bordering of `a` by vectors `x` and `z`.
pub fn general_border(a: &RationalMatrix, x: &[Rational], z: &[Rational]) -> Result<RationalMatrix> {
    let n = a.order()?;
    if x.len() != n || z.len() != n {
        return Err(Error::Dimension(format!(
            "border vectors must have length {n}, got x of length {} and z of length {}",
            x.len(),
            z.len()
        )));
    }
    let mut m = a.clone();
    for i in 0..n {
        for j in 0..n {
            let v = a.at(i, j) - &(&z[i] * &x[j]);
            m.set(i, j, v);
        }
    }
    let mut b = RationalMatrix::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            b.set(i, j, m.at(i, j).clone());
        }
        b.set(i, n, z[i].clone());
    }
    for j in 0..n {
        let mut s = Rational::zero();
        for i in 0..n {
            s += &x[i] * m.at(i, j);
        }
        b.set(n, j, s);
    }
    let corner = x
        .iter()
        .zip(z)
        .fold(Rational::zero(), |acc, (xi, zi)| acc + xi * zi);
    b.set(n, n, corner);
    Ok(b)
}

/// Positions where the scaling source row is nonzero but the produced row
/// is zero. Such a position would silently change the bordered pattern, so
/// the bordering constructors treat a nonempty result as an error.
pub fn detect_cancellation(source_row: &[Rational], new_row: &[Rational]) -> Vec<usize> {
    source_row
        .iter()
        .zip(new_row)
        .enumerate()
        .filter(|(_, (s, v))| !s.is_zero() && v.is_zero())
        .map(|(i, _)| i)
        .collect()
}

fn guard_cancellation(m: &RationalMatrix, source_row: usize, b: &RationalMatrix) -> Result<()> {
    let n = m.rows();
    let source: Vec<Rational> = (0..n).map(|j| m.at(source_row, j).clone()).collect();
    let produced: Vec<Rational> = (0..n).map(|j| b.at(n, j).clone()).collect();
    let cancelled = detect_cancellation(&source, &produced);
    if cancelled.is_empty() {
        Ok(())
    } else {
        Err(Error::Cancellation(cancelled))
    }
}

/// Bordering with the border row and column at the same index: x = a_kk e_k
/// and z = e_k. Requires a nonzero diagonal entry at (k, k).
pub fn equal_index_border(a: &RationalMatrix, k: usize) -> Result<RationalMatrix> {
    let n = a.order()?;
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, order: n });
    }
    let akk = a.at(k, k).clone();
    if akk.is_zero() {
        return Err(Error::Precondition(format!(
            "diagonal entry ({k}, {k}) must be nonzero"
        )));
    }
    let mut m = a.clone();
    m.set(k, k, Rational::zero());
    let mut b = RationalMatrix::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            b.set(i, j, m.at(i, j).clone());
        }
    }
    b.set(k, n, Rational::one());
    for j in 0..n {
        b.set(n, j, &akk * m.at(k, j));
    }
    b.set(n, n, akk);
    guard_cancellation(&m, k, &b)?;
    Ok(b)
}

/// Bordering with differing border indices: x = b e_k and z = e_j, j != k.
/// The new corner entry is zero.
pub fn unequal_index_border(
    a: &RationalMatrix,
    j: usize,
    k: usize,
    b: &Rational,
) -> Result<RationalMatrix> {
    let n = a.order()?;
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, order: n });
    }
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, order: n });
    }
    if j == k {
        return Err(Error::Precondition(
            "border indices j and k must differ".into(),
        ));
    }
    if b.is_zero() {
        return Err(Error::Precondition("border entry b must be nonzero".into()));
    }
    let mut m = a.clone();
    let adjusted = m.at(j, k) - b;
    m.set(j, k, adjusted);
    let mut out = RationalMatrix::zeros(n + 1, n + 1);
    for r in 0..n {
        for c in 0..n {
            out.set(r, c, m.at(r, c).clone());
        }
    }
    out.set(j, n, Rational::one());
    for c in 0..n {
        out.set(n, c, b * m.at(k, c));
    }
    guard_cancellation(&m, k, &out)?;
    Ok(out)
}

/// Applies any [`BorderStep`], returning the bordered matrix.
pub fn apply_border_step(a: &RationalMatrix, step: &BorderStep) -> Result<RationalMatrix> {
    match step {
        BorderStep::General { x, z } => general_border(a, x, z),
        BorderStep::EqualIndex { k, .. } => equal_index_border(a, *k),
        BorderStep::UnequalIndex { j, k, b, .. } => unequal_index_border(a, *j, *k, b),
    }
}

/// Precondition report for the equal-index construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualIndexReport {
    pub diagonal_nonzero: bool,
    pub row_entry_nonzero: bool,
    #[serde(with = "rational_string")]
    pub minor_determinant: Rational,
    pub minor_nonsingular: bool,
}

impl EqualIndexReport {
    pub fn all_hold(&self) -> bool {
        self.diagonal_nonzero && self.row_entry_nonzero && self.minor_nonsingular
    }
}

/// Checks the equal-index hypotheses at (k, v): a_kk nonzero, a_kv nonzero
/// with v distinct from k, and the minor of `a` deleting row k and column v
/// nonsingular. The caller separately supplies a full-rank certification
/// for `a` itself.
pub fn check_equal_index(a: &RationalMatrix, k: usize, v: usize) -> Result<EqualIndexReport> {
    let n = a.order()?;
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, order: n });
    }
    if v >= n {
        return Err(Error::IndexOutOfRange { index: v, order: n });
    }
    let minor_determinant = a.minor(k, v)?.det()?;
    Ok(EqualIndexReport {
        diagonal_nonzero: !a.at(k, k).is_zero(),
        row_entry_nonzero: v != k && !a.at(k, v).is_zero(),
        minor_nonsingular: !minor_determinant.is_zero(),
        minor_determinant,
    })
}

/// Precondition report for the unequal-index construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnequalIndexReport {
    pub border_position_non_jacobian: bool,
    pub row_entry_nonzero: bool,
    #[serde(with = "rational_string")]
    pub minor_determinant: Rational,
    pub minor_nonsingular: bool,
}

impl UnequalIndexReport {
    pub fn all_hold(&self) -> bool {
        self.border_position_non_jacobian && self.row_entry_nonzero && self.minor_nonsingular
    }
}

/// Checks the unequal-index hypotheses: position (j, k) is not a Jacobian
/// variable in `placement`, a_kv is nonzero, and the minor of `a` deleting
/// row j and column v is nonsingular. Here v may coincide with k.
pub fn check_unequal_index(
    a: &RationalMatrix,
    placement: &VariablePlacement,
    j: usize,
    k: usize,
    v: usize,
) -> Result<UnequalIndexReport> {
    let n = a.order()?;
    for idx in [j, k, v] {
        if idx >= n {
            return Err(Error::IndexOutOfRange { index: idx, order: n });
        }
    }
    let minor_determinant = a.minor(j, v)?.det()?;
    Ok(UnequalIndexReport {
        border_position_non_jacobian: !placement.contains((j, k)),
        row_entry_nonzero: !a.at(k, v).is_zero(),
        minor_nonsingular: !minor_determinant.is_zero(),
        minor_determinant,
    })
}

fn materialize_step(step: &BorderStep, round: usize, order: usize) -> Result<BorderStep> {
    match step {
        BorderStep::General { .. } => Err(Error::Precondition(
            "recursion is defined for the equal-index and unequal-index constructions only".into(),
        )),
        BorderStep::EqualIndex { k, v } => Ok(BorderStep::EqualIndex {
            k: if round == 0 { *k } else { order - 1 },
            v: *v,
        }),
        BorderStep::UnequalIndex { j, k, b, v } => Ok(BorderStep::UnequalIndex {
            j: if round == 0 { *j } else { order - 1 },
            k: *k,
            b: b.clone(),
            v: *v,
        }),
    }
}

/// Exact cross-check of the determinant recursion law relating the bordered
/// matrix's last-row minor to the source matrix's border-row minor. The
/// sign is `(-1)^(i + n)` for 1-based border row i and source order n,
/// which is `+1` whenever the border row is the last row. A violation is a
/// bug in this crate, not a property of the input.
fn guard_determinant_recursion(
    a: &RationalMatrix,
    b: &RationalMatrix,
    border_row: usize,
    v: usize,
    round: usize,
) -> Result<()> {
    let n = a.rows();
    let lhs = b.minor(n, v)?.det()?;
    let rhs = a.minor(border_row, v)?.det()?;
    let expected = if (border_row + 1 + n) % 2 == 0 {
        rhs
    } else {
        -rhs
    };
    if lhs == expected {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "round {round}: determinant recursion law violated, got {lhs} expecting {expected}"
        )))
    }
}

/// Applies `count` borderings of the given kind, advancing the border row
/// to the new last row after the first round. Every round checks the
/// construction's hypotheses (when `v` is supplied this includes the minor
/// determinant and the exact recursion law relating consecutive minors) and
/// re-certifies the bordered matrix with the maximal placement; the
/// unequal-index rounds additionally require a full-rank placement that
/// avoids the bordered position. Returns the final matrix together with
/// provenance holding the materialized steps and per-round certification
/// summaries.
pub fn recursive_border(
    a: &RationalMatrix,
    step: &BorderStep,
    count: usize,
) -> Result<(RationalMatrix, BorderProvenance)> {
    recursive_border_with(a, count, |round, order| materialize_step(step, round, order))
}

/// Recursion driver with a caller-supplied schedule: `schedule(round, order)`
/// produces the concrete step for that round. [`recursive_border`] is the
/// fixed-step instance advancing indices to the new last row each round.
pub fn recursive_border_with(
    a: &RationalMatrix,
    count: usize,
    mut schedule: impl FnMut(usize, usize) -> Result<BorderStep>,
) -> Result<(RationalMatrix, BorderProvenance)> {
    let mut current = a.clone();
    let mut provenance = BorderProvenance {
        base: a.clone(),
        steps: Vec::with_capacity(count),
        rounds: Vec::with_capacity(count),
    };
    for round in 0..count {
        let n = current.order()?;
        if round == 0 && !current.is_nilpotent()? {
            return Err(Error::Precondition(
                "round 0: base matrix is not nilpotent".to_string(),
            ));
        }
        let this = schedule(round, n)?;
        let (bordered, border_row, v) = match &this {
            BorderStep::EqualIndex { k, v } => {
                if round == 0 {
                    let placement =
                        VariablePlacement::all_nonzeros(&sign_of(&current)?);
                    let cert = certify_nilpotent_jacobian(&current, &placement)?;
                    if !cert.full_rank {
                        return Err(Error::Precondition(format!(
                            "round {round}: base matrix does not allow a full-rank Jacobian"
                        )));
                    }
                }
                if let Some(v) = v {
                    let report = check_equal_index(&current, *k, *v)?;
                    if !report.all_hold() {
                        return Err(Error::Precondition(format!(
                            "round {round}: equal-index hypotheses fail at (k={k}, v={v}): {report:?}"
                        )));
                    }
                }
                (equal_index_border(&current, *k)?, *k, *v)
            }
            BorderStep::UnequalIndex { j, k, b, v } => {
                let placement = find_full_rank_placement(&current, &[(*j, *k)])?
                    .ok_or_else(|| {
                        Error::Precondition(format!(
                            "round {round}: no full-rank placement avoids position ({j}, {k})"
                        ))
                    })?;
                if let Some(v) = v {
                    let report = check_unequal_index(&current, &placement, *j, *k, *v)?;
                    if !report.all_hold() {
                        return Err(Error::Precondition(format!(
                            "round {round}: unequal-index hypotheses fail at (j={j}, k={k}, v={v}): {report:?}"
                        )));
                    }
                }
                (unequal_index_border(&current, *j, *k, b)?, *j, *v)
            }
            BorderStep::General { .. } => {
                return Err(Error::Precondition(format!(
                    "round {round}: recursion steps must be equal-index or unequal-index"
                )))
            }
        };
        if let Some(v) = v {
            guard_determinant_recursion(&current, &bordered, border_row, v, round)?;
        }
        let placement = VariablePlacement::all_nonzeros(&sign_of(&bordered)?);
        let cert = certify_nilpotent_jacobian(&bordered, &placement)?;
        if !cert.full_rank {
            return Err(Error::Precondition(format!(
                "round {round}: bordered matrix lost the full-rank Jacobian"
            )));
        }
        provenance.rounds.push(RoundSummary {
            order: bordered.order()?,
            nilpotent: cert.nilpotent,
            jacobian_rank: cert.jacobian_rank,
            full_rank: cert.full_rank,
        });
        provenance.steps.push(this);
        current = bordered;
    }
    Ok((current, provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use num_traits::Signed;
    use proptest::prelude::*;

    fn bordering_seed() -> RationalMatrix {
        RationalMatrix::from_i64_rows(&[
            &[0, 1, 0, 0],
            &[0, -1, 1, 0],
            &[1, 0, 0, 1],
            &[1, 0, -1, 1],
        ])
    }

    fn two_cycle() -> RationalMatrix {
        RationalMatrix::from_i64_rows(&[&[1, -1], &[1, -1]])
    }

    fn three_cycle_column() -> RationalMatrix {
        RationalMatrix::from_i64_rows(&[&[1, -1, 0], &[1, 0, -1], &[1, 0, -1]])
    }

    #[test]
    fn zero_vectors_append_an_isolated_zero() {
        let a = two_cycle();
        let zero = vec![Rational::zero(); 2];
        let b = general_border(&a, &zero, &zero).unwrap();
        let expect = a
            .direct_sum(&RationalMatrix::zeros(1, 1))
            .unwrap();
        assert_eq!(b, expect);
    }

    #[test]
    fn general_border_reproduces_order3_tridiagonal_witness() {
        let a = two_cycle();
        let x = vec![ratio(-1, 2), rat(1)];
        let z = vec![rat(0), rat(-1)];
        let b = general_border(&a, &x, &z).unwrap();
        let expect = RationalMatrix::from_rows(vec![
            vec![rat(1), rat(-1), rat(0)],
            vec![ratio(1, 2), rat(0), rat(-1)],
            vec![rat(0), ratio(1, 2), rat(-1)],
        ])
        .unwrap();
        assert_eq!(b, expect);
        assert!(b.is_nilpotent().unwrap());
    }

    #[test]
    fn general_border_reproduces_order3_full_first_row_witness() {
        let a = two_cycle();
        let x = vec![rat(-1), rat(2)];
        let z = vec![ratio(1, 2), rat(0)];
        let b = general_border(&a, &x, &z).unwrap();
        let expect = RationalMatrix::from_rows(vec![
            vec![ratio(3, 2), rat(-2), ratio(1, 2)],
            vec![rat(1), rat(-1), rat(0)],
            vec![ratio(1, 2), rat(0), ratio(-1, 2)],
        ])
        .unwrap();
        assert_eq!(b, expect);
        assert!(b.is_nilpotent().unwrap());
    }

    #[test]
    fn equal_index_border_of_seed_is_the_known_order5_matrix() {
        let b = equal_index_border(&bordering_seed(), 3).unwrap();
        let expect = RationalMatrix::from_i64_rows(&[
            &[0, 1, 0, 0, 0],
            &[0, -1, 1, 0, 0],
            &[1, 0, 0, 1, 0],
            &[1, 0, -1, 0, 1],
            &[1, 0, -1, 0, 1],
        ]);
        assert_eq!(b, expect);
        assert!(b.is_nilpotent().unwrap());
    }

    #[test]
    fn order_one_equal_index_border() {
        let a = RationalMatrix::from_i64_rows(&[&[5]]);
        let b = equal_index_border(&a, 0).unwrap();
        assert_eq!(b, RationalMatrix::from_i64_rows(&[&[0, 1], &[0, 5]]));
        let p = b.char_poly().unwrap();
        assert_eq!(p.coeffs(), &[rat(-5), rat(0)]);
    }

    #[test]
    fn unequal_index_border_matches_parametrized_display() {
        for b_val in [rat(1), rat(3), ratio(-1, 2)] {
            let out = unequal_index_border(&two_cycle(), 0, 1, &b_val).unwrap();
            let expect = RationalMatrix::from_rows(vec![
                vec![rat(1), -Rational::one() - &b_val, rat(1)],
                vec![rat(1), rat(-1), rat(0)],
                vec![b_val.clone(), -&b_val, rat(0)],
            ])
            .unwrap();
            assert_eq!(out, expect);
            assert!(out.is_nilpotent().unwrap());
        }
    }

    #[test]
    fn unequal_index_border_of_zero_matrix() {
        let b = unequal_index_border(&RationalMatrix::zeros(2, 2), 0, 1, &rat(1)).unwrap();
        // the (k)th row of the adjusted matrix is still zero, so the new
        // last row is zero as well
        let expect = RationalMatrix::from_i64_rows(&[&[0, -1, 1], &[0, 0, 0], &[0, 0, 0]]);
        assert_eq!(b, expect);
    }

    #[test]
    fn border_precondition_errors() {
        let seed = bordering_seed();
        assert!(matches!(
            equal_index_border(&seed, 0),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            equal_index_border(&seed, 9),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            unequal_index_border(&seed, 1, 1, &rat(1)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            unequal_index_border(&seed, 0, 1, &rat(0)),
            Err(Error::Precondition(_))
        ));
        let short = vec![rat(1)];
        assert!(matches!(
            general_border(&seed, &short, &short),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn cancellation_detector_flags_vanished_entries() {
        let source = vec![rat(1), rat(0), rat(-2)];
        let produced = vec![rat(0), rat(0), rat(-4)];
        assert_eq!(detect_cancellation(&source, &produced), vec![0]);
        assert!(detect_cancellation(&source, &source).is_empty());
    }

    #[test]
    fn equal_index_preconditions_on_seed() {
        let a = bordering_seed();
        let good = check_equal_index(&a, 3, 0).unwrap();
        assert!(good.diagonal_nonzero);
        assert!(good.row_entry_nonzero);
        assert!(good.minor_nonsingular);
        assert_eq!(good.minor_determinant, rat(1));
        assert!(good.all_hold());

        let same_index = check_equal_index(&a, 3, 3).unwrap();
        assert!(!same_index.row_entry_nonzero);
        assert!(!same_index.all_hold());

        let zero_diag = check_equal_index(&a, 0, 1).unwrap();
        assert!(!zero_diag.diagonal_nonzero);
        assert!(!zero_diag.all_hold());
    }

    #[test]
    fn unequal_index_preconditions() {
        let a = two_cycle();
        let placement = VariablePlacement::new(vec![(0, 0), (1, 0)]);
        let report = check_unequal_index(&a, &placement, 0, 1, 0).unwrap();
        assert!(report.border_position_non_jacobian);
        assert!(report.row_entry_nonzero);
        assert_eq!(report.minor_determinant, rat(-1));
        assert!(report.all_hold());

        let v3 = three_cycle_column();
        let placement = find_full_rank_placement(&v3, &[(2, 0)]).unwrap().unwrap();
        let report = check_unequal_index(&v3, &placement, 2, 0, 1).unwrap();
        assert!(report.all_hold());
        assert_eq!(report.minor_determinant, rat(-1));

        let inside = VariablePlacement::new(vec![(0, 1)]);
        let report = check_unequal_index(&a, &inside, 0, 1, 0).unwrap();
        assert!(!report.border_position_non_jacobian);
    }

    #[test]
    fn recursion_with_zero_count_is_identity() {
        let a = bordering_seed();
        let step = BorderStep::EqualIndex { k: 3, v: Some(0) };
        let (out, prov) = recursive_border(&a, &step, 0).unwrap();
        assert_eq!(out, a);
        assert!(prov.steps.is_empty());
        assert!(prov.rounds.is_empty());
        assert_eq!(prov.replay().unwrap(), a);
    }

    #[test]
    fn equal_index_recursion_grows_and_recertifies() {
        let a = bordering_seed();
        let step = BorderStep::EqualIndex { k: 3, v: Some(0) };
        let (out, prov) = recursive_border(&a, &step, 3).unwrap();
        assert_eq!(out.order().unwrap(), 7);
        assert!(out.is_nilpotent().unwrap());
        assert_eq!(prov.rounds.len(), 3);
        for (i, round) in prov.rounds.iter().enumerate() {
            assert_eq!(round.order, 5 + i);
            assert!(round.nilpotent);
            assert!(round.full_rank);
            assert_eq!(round.jacobian_rank, 5 + i);
        }
        assert_eq!(prov.replay().unwrap(), out);
        // the border row advances to the last row after the first round
        assert_eq!(prov.steps[0], BorderStep::EqualIndex { k: 3, v: Some(0) });
        assert_eq!(prov.steps[1], BorderStep::EqualIndex { k: 4, v: Some(0) });
        assert_eq!(prov.steps[2], BorderStep::EqualIndex { k: 5, v: Some(0) });
    }

    #[test]
    fn unequal_index_recursion_keeps_unit_magnitudes() {
        let step = BorderStep::UnequalIndex {
            j: 2,
            k: 0,
            b: rat(1),
            v: Some(1),
        };
        let (out, prov) = recursive_border(&three_cycle_column(), &step, 3).unwrap();
        assert_eq!(out.order().unwrap(), 6);
        assert!(out.is_nilpotent().unwrap());
        for (_, entry) in out.entries() {
            let mag = entry.clone().abs();
            assert!(mag.is_zero() || mag.is_one());
        }
        assert_eq!(prov.replay().unwrap(), out);
        assert_eq!(
            prov.steps[1],
            BorderStep::UnequalIndex { j: 3, k: 0, b: rat(1), v: Some(1) }
        );
    }

    #[test]
    fn first_unequal_round_is_the_known_order4_matrix() {
        let step = BorderStep::UnequalIndex {
            j: 2,
            k: 0,
            b: rat(1),
            v: Some(1),
        };
        let (out, _) = recursive_border(&three_cycle_column(), &step, 1).unwrap();
        let expect = RationalMatrix::from_i64_rows(&[
            &[1, -1, 0, 0],
            &[1, 0, -1, 0],
            &[0, 0, -1, 1],
            &[1, -1, 0, 0],
        ]);
        assert_eq!(out, expect);
    }

    #[test]
    fn recursion_rejects_general_steps_and_bad_bases() {
        let a = bordering_seed();
        let step = BorderStep::General {
            x: vec![Rational::zero(); 4],
            z: vec![Rational::zero(); 4],
        };
        assert!(matches!(
            recursive_border(&a, &step, 1),
            Err(Error::Precondition(_))
        ));
        // a base without a full-rank Jacobian fails round 0
        let weak = RationalMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]);
        let step = BorderStep::EqualIndex { k: 1, v: Some(0) };
        assert!(matches!(
            recursive_border(&weak, &step, 1),
            Err(Error::Precondition(_))
        ));
        // a full-rank but non-nilpotent base fails round 0 by name
        let spread = RationalMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]);
        let step = BorderStep::EqualIndex { k: 1, v: None };
        match recursive_border(&spread, &step, 1) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("not nilpotent")),
            other => panic!("expected a nilpotency failure, got {other:?}"),
        }
    }

    #[test]
    fn schedule_driven_recursion_matches_the_fixed_step() {
        let a = bordering_seed();
        let step = BorderStep::EqualIndex { k: 3, v: Some(0) };
        let (fixed, _) = recursive_border(&a, &step, 3).unwrap();
        let (scheduled, prov) = recursive_border_with(&a, 3, |_, order| {
            Ok(BorderStep::EqualIndex {
                k: order - 1,
                v: Some(0),
            })
        })
        .unwrap();
        assert_eq!(fixed, scheduled);
        assert_eq!(prov.rounds.len(), 3);
    }

    #[test]
    fn schedule_returning_general_steps_is_rejected() {
        let a = bordering_seed();
        let result = recursive_border_with(&a, 1, |_, order| {
            Ok(BorderStep::General {
                x: vec![Rational::zero(); order],
                z: vec![Rational::zero(); order],
            })
        });
        assert!(matches!(result, Err(Error::Precondition(_))));
    }

    #[test]
    fn provenance_serializes_and_round_trips() {
        let step = BorderStep::EqualIndex { k: 3, v: Some(0) };
        let (_, prov) = recursive_border(&bordering_seed(), &step, 2).unwrap();
        let json = serde_json::to_string(&prov).unwrap();
        assert!(json.contains("\"kind\":\"equal_index\""));
        let back: BorderProvenance = serde_json::from_str(&json).unwrap();
        assert_eq!(back, prov);
        assert_eq!(back.replay().unwrap(), prov.replay().unwrap());
    }

    #[test]
    fn border_step_json_embeds_rationals_as_strings() {
        let step = BorderStep::UnequalIndex {
            j: 2,
            k: 0,
            b: ratio(-1, 2),
            v: None,
        };
        let json = serde_json::to_string(&step).unwrap();
        assert_eq!(json, r#"{"kind":"unequal_index","j":2,"k":0,"b":"-1/2"}"#);
        let general = BorderStep::General {
            x: vec![ratio(1, 3), rat(0)],
            z: vec![rat(-2), rat(5)],
        };
        let json = serde_json::to_string(&general).unwrap();
        assert_eq!(json, r#"{"kind":"general","x":["1/3","0"],"z":["-2","5"]}"#);
        let back: BorderStep = serde_json::from_str(&json).unwrap();
        assert_eq!(back, general);
    }

    fn sample_matrix(n: usize, seed: u64) -> RationalMatrix {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 9) as i64 - 4
        };
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, ratio(next(), 1 + (next().unsigned_abs() % 2) as i64));
            }
        }
        m
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]

        #[test]
        fn bordering_shifts_the_characteristic_polynomial(seed in 0u64..2000, n in 1usize..6) {
            let a = sample_matrix(n, seed);
            let x: Vec<Rational> = (0..n).map(|i| ratio(seed as i64 % 7 - 3 + i as i64, 2)).collect();
            let z: Vec<Rational> = (0..n).map(|i| ratio((seed as i64 / 7) % 5 - 2 - i as i64, 3)).collect();
            let b = general_border(&a, &x, &z).unwrap();
            let pa = a.char_poly().unwrap();
            let pb = b.char_poly().unwrap();
            let mut expect = pa.coeffs().to_vec();
            expect.push(Rational::zero());
            prop_assert_eq!(pb.coeffs(), &expect[..]);
        }

        #[test]
        fn equal_index_is_a_general_border_substitution(seed in 0u64..2000, n in 1usize..6, k_pick in 0usize..6) {
            let mut a = sample_matrix(n, seed);
            let k = k_pick % n;
            if a.at(k, k).is_zero() {
                a.set(k, k, rat(2));
            }
            let akk = a.at(k, k).clone();
            let mut x = vec![Rational::zero(); n];
            x[k] = akk;
            let mut z = vec![Rational::zero(); n];
            z[k] = Rational::one();
            prop_assert_eq!(
                equal_index_border(&a, k).unwrap(),
                general_border(&a, &x, &z).unwrap()
            );
        }

        #[test]
        fn unequal_index_is_a_general_border_substitution(seed in 0u64..2000, n in 2usize..6, picks in (0usize..6, 0usize..6)) {
            let a = sample_matrix(n, seed);
            let j = picks.0 % n;
            let k = (j + 1 + picks.1 % (n - 1)) % n;
            prop_assume!(j != k);
            let b_val = ratio(3, 2);
            let mut x = vec![Rational::zero(); n];
            x[k] = b_val.clone();
            let mut z = vec![Rational::zero(); n];
            z[j] = Rational::one();
            prop_assert_eq!(
                unequal_index_border(&a, j, k, &b_val).unwrap(),
                general_border(&a, &x, &z).unwrap()
            );
        }
    }
}
