//! Full-rank Jacobian certification at a nilpotent realization.
//!
//! Designating m nonzero entries of a matrix as variables turns the n
//! characteristic-polynomial coefficients into functions of those
//! variables. When the matrix is nilpotent and the n x m Jacobian of the
//! coefficients has rank n, implicit-function reasoning upgrades the single
//! matrix to a certificate that every superpattern of its sign pattern is
//! spectrally arbitrary. This module computes that Jacobian exactly and
//! packages the certificate, together with two independent cross-checks
//! (irreducibility of the pattern and the realization being
//! nonderogatory) that must accompany a positive certificate.

use serde::{Deserialize, Serialize};

use crate::charpoly::{newton_interpolate, poly_derivative, poly_gcd_monic, poly_trim};
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::pattern::{sign_of, SignPattern};
use crate::rational::{rat, Rational};
use num_traits::{Signed, Zero};

/// Ordered list of matrix positions designated as Jacobian variables.
/// Positions are 0-based (row, column) pairs and must be distinct.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VariablePlacement {
    pub positions: Vec<(usize, usize)>,
}

impl VariablePlacement {
    pub fn new(positions: Vec<(usize, usize)>) -> Self {
        VariablePlacement { positions }
    }

    /// Every nonzero position of the pattern, in row-major order. This is
    /// the default placement: it maximizes the achievable Jacobian rank.
    pub fn all_nonzeros(pattern: &SignPattern) -> Self {
        VariablePlacement {
            positions: pattern.nonzero_positions(),
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains(&self, pos: (usize, usize)) -> bool {
        self.positions.contains(&pos)
    }

    pub(crate) fn validate_against(&self, a: &RationalMatrix) -> Result<()> {
        let n = a.order()?;
        for (idx, &(r, c)) in self.positions.iter().enumerate() {
            if r >= n || c >= n {
                return Err(Error::IndexOutOfRange {
                    index: r.max(c),
                    order: n,
                });
            }
            if a.at(r, c).is_zero() {
                return Err(Error::InvalidPlacement {
                    row: r,
                    col: c,
                    reason: "entry is zero".into(),
                });
            }
            if self.positions[..idx].contains(&(r, c)) {
                return Err(Error::InvalidPlacement {
                    row: r,
                    col: c,
                    reason: "position listed twice".into(),
                });
            }
        }
        Ok(())
    }
}

/// Result of a check that may or may not be decidable in exact arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckOutcome {
    Passed,
    Failed,
    /// The check could not be completed exactly (for instance a repeated
    /// irrational eigenvalue); no conclusion is recorded.
    NotExact,
}

impl CheckOutcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            CheckOutcome::Passed
        } else {
            CheckOutcome::Failed
        }
    }
}

/// Certificate produced by [`certify_nilpotent_jacobian`].
///
/// `superpatterns_spectrally_arbitrary` is the headline conclusion and is
/// true exactly when `nilpotent && full_rank`. The two `*_check` fields are
/// cross-validation: a positive certificate forces both to pass, and a
/// violation indicates a bug in this crate rather than a property of the
/// input.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Certification {
    pub pattern: SignPattern,
    pub realization: RationalMatrix,
    pub placement: VariablePlacement,
    pub jacobian: RationalMatrix,
    pub nilpotent: bool,
    pub jacobian_rank: usize,
    pub full_rank: bool,
    pub nonderogatory_check: CheckOutcome,
    pub irreducible_check: CheckOutcome,
    pub superpatterns_spectrally_arbitrary: bool,
}

/// Exact Jacobian of the characteristic-polynomial coefficient functions
/// with respect to the placed entries, evaluated at `a`.
///
/// Row i holds the derivatives of the coefficient of `z^(n-1-i)`; column t
/// belongs to `placement.positions[t]`. The derivative with respect to the
/// entry at (p, q) is read off the cofactor identity: perturbing one entry
/// changes `det(zI - A)` affinely, with slope `-(-1)^(p+q)` times the minor
/// of `zI - A` at (p, q). That minor is a polynomial in z of degree at most
/// n - 1, recovered exactly from its values at the integer nodes 0..n-1.
pub fn jacobian(a: &RationalMatrix, placement: &VariablePlacement) -> Result<RationalMatrix> {
    let n = a.order()?;
    placement.validate_against(a)?;
    let nodes: Vec<Rational> = (0..n as i64).map(rat).collect();
    let shifted: Vec<RationalMatrix> = nodes
        .iter()
        .map(|z0| a.neg().add_diag(z0))
        .collect::<Result<_>>()?;
    let mut jac = RationalMatrix::zeros(n, placement.len());
    for (t, &(p, q)) in placement.positions.iter().enumerate() {
        let values: Vec<Rational> = shifted
            .iter()
            .map(|m| m.minor(p, q)?.det())
            .collect::<Result<_>>()?;
        let mut g = newton_interpolate(&nodes, &values);
        g.resize(n.max(1), Rational::zero());
        let flip = (p + q) % 2 == 0;
        for i in 0..n {
            let mut v = g[n - 1 - i].clone();
            if flip {
                v = -v;
            }
            jac.set(i, t, v);
        }
    }
    Ok(jac)
}

/// Runs the full certification at `a` with the given placement.
///
/// The sign pattern in the report is the pattern of `a` itself. The
/// nonderogatory and irreducibility checks are always computed; they are
/// only load-bearing when the certificate is positive.
pub fn certify_nilpotent_jacobian(
    a: &RationalMatrix,
    placement: &VariablePlacement,
) -> Result<Certification> {
    let n = a.order()?;
    placement.validate_against(a)?;
    let pattern = sign_of(a)?;
    let jac = jacobian(a, placement)?;
    let jacobian_rank = jac.rank();
    let full_rank = jacobian_rank == n;
    let nilpotent = a.is_nilpotent()?;
    let nonderogatory_check = nonderogatory_outcome(a)?;
    let irreducible_check = CheckOutcome::from_bool(pattern.is_irreducible());
    Ok(Certification {
        pattern,
        realization: a.clone(),
        placement: placement.clone(),
        jacobian: jac,
        nilpotent,
        jacobian_rank,
        full_rank,
        nonderogatory_check,
        irreducible_check,
        superpatterns_spectrally_arbitrary: nilpotent && full_rank,
    })
}

/// Searches for a placement over the nonzeros of `a`, disjoint from
/// `excluded`, whose Jacobian has rank n.
///
/// Deterministic search order: the maximal candidate (all nonzeros minus
/// `excluded`, row-major) is tried first; if it does not reach rank n the
/// answer is `None`. Otherwise columns are dropped greedily in enumeration
/// order whenever removal keeps the rank at n, which yields a minimal
/// certifying set.
pub fn find_full_rank_placement(
    a: &RationalMatrix,
    excluded: &[(usize, usize)],
) -> Result<Option<VariablePlacement>> {
    let n = a.order()?;
    let pattern = sign_of(a)?;
    let candidates: Vec<(usize, usize)> = pattern
        .nonzero_positions()
        .into_iter()
        .filter(|pos| !excluded.contains(pos))
        .collect();
    let maximal = VariablePlacement::new(candidates.clone());
    let full = jacobian(a, &maximal)?;
    let columns: Vec<Vec<Rational>> = (0..full.cols())
        .map(|c| (0..n).map(|r| full.at(r, c).clone()).collect())
        .collect();
    let rank_of = |selected: &[usize]| -> usize {
        let mut m = RationalMatrix::zeros(n, selected.len());
        for (t, &c) in selected.iter().enumerate() {
            for r in 0..n {
                m.set(r, t, columns[c][r].clone());
            }
        }
        m.rank()
    };
    let mut selected: Vec<usize> = (0..candidates.len()).collect();
    if rank_of(&selected) < n {
        return Ok(None);
    }
    let mut i = 0;
    while i < selected.len() {
        let mut trial = selected.clone();
        trial.remove(i);
        if rank_of(&trial) == n {
            selected = trial;
        } else {
            i += 1;
        }
    }
    Ok(Some(VariablePlacement::new(
        selected.into_iter().map(|c| candidates[c]).collect(),
    )))
}

/// Decides whether `a` is nonderogatory, staying within exact arithmetic.
///
/// Nilpotent matrices reduce to checking that the index of nilpotency
/// equals the order. Otherwise the repeated eigenvalues are the roots of
/// gcd(p, p'); a squarefree characteristic polynomial settles the question
/// immediately, and for rational repeated roots the geometric multiplicity
/// is checked as rank(A - lambda*I) = n - 1. Repeated irrational or
/// nonreal roots are reported as [`CheckOutcome::NotExact`].
pub fn nonderogatory_outcome(a: &RationalMatrix) -> Result<CheckOutcome> {
    let n = a.order()?;
    if n == 0 {
        return Ok(CheckOutcome::Passed);
    }
    let p = a.char_poly()?;
    if p.is_power_of_z() {
        return Ok(CheckOutcome::from_bool(
            a.index_of_nilpotency()? == Some(n),
        ));
    }
    let asc = p.monomial_coeffs();
    let g = poly_gcd_monic(&asc, &poly_derivative(&asc));
    if g.len() <= 1 {
        return Ok(CheckOutcome::Passed);
    }
    let roots = match certain_rational_roots(&g) {
        Some(r) => r,
        None => return Ok(CheckOutcome::NotExact),
    };
    for lambda in roots {
        let shifted = a.add_diag(&-lambda)?;
        if shifted.rank() != n - 1 {
            return Ok(CheckOutcome::Failed);
        }
    }
    Ok(CheckOutcome::Passed)
}

/// All roots of the monic polynomial, provided every root is rational;
/// `None` as soon as that cannot be certified. Handles a power-of-z factor
/// plus a residual factor of degree at most two.
fn certain_rational_roots(g: &[Rational]) -> Option<Vec<Rational>> {
    let g = poly_trim(g.to_vec());
    let zero_mult = g.iter().take_while(|c| c.is_zero()).count();
    let mut roots = Vec::new();
    if zero_mult > 0 {
        roots.push(Rational::zero());
    }
    let h = &g[zero_mult..];
    match h.len() {
        0 | 1 => Some(roots),
        2 => {
            roots.push(-&h[0] / &h[1]);
            Some(roots)
        }
        3 => {
            let b = &h[1] / &h[2];
            let c = &h[0] / &h[2];
            let disc = &b * &b - rat(4) * &c;
            let s = rational_sqrt(&disc)?;
            let two = rat(2);
            let r1 = (-&b + &s) / &two;
            let r2 = (-&b - &s) / &two;
            if !roots.contains(&r1) {
                roots.push(r1);
            }
            if !roots.contains(&r2) {
                roots.push(r2);
            }
            Some(roots)
        }
        _ => None,
    }
}

/// Exact rational square root, when one exists.
fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let num = x.numer().sqrt();
    let den = x.denom().sqrt();
    if &(&num * &num) == x.numer() && &(&den * &den) == x.denom() {
        Some(Rational::new(num, den))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
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

    #[test]
    fn order_one_jacobian_is_minus_one() {
        let a = RationalMatrix::from_i64_rows(&[&[-3]]);
        let j = jacobian(&a, &VariablePlacement::new(vec![(0, 0)])).unwrap();
        assert_eq!(j, RationalMatrix::from_i64_rows(&[&[-1]]));
    }

    #[test]
    fn two_cycle_jacobian_columns_are_exact() {
        let j = jacobian(&two_cycle(), &VariablePlacement::new(vec![(0, 0), (1, 0)])).unwrap();
        assert_eq!(j, RationalMatrix::from_i64_rows(&[&[-1, 0], &[-1, 1]]));
    }

    #[test]
    fn seed_matrix_certifies_with_all_nonzeros() {
        let a = bordering_seed();
        let placement = VariablePlacement::all_nonzeros(&sign_of(&a).unwrap());
        assert_eq!(placement.len(), 8);
        let cert = certify_nilpotent_jacobian(&a, &placement).unwrap();
        assert!(cert.nilpotent);
        assert_eq!(cert.jacobian_rank, 4);
        assert!(cert.full_rank);
        assert!(cert.superpatterns_spectrally_arbitrary);
        assert_eq!(cert.nonderogatory_check, CheckOutcome::Passed);
        assert_eq!(cert.irreducible_check, CheckOutcome::Passed);
    }

    #[test]
    fn identity_is_not_nilpotent_but_still_reports() {
        let a = RationalMatrix::identity(2);
        let placement = VariablePlacement::new(vec![(0, 0), (1, 1)]);
        let cert = certify_nilpotent_jacobian(&a, &placement).unwrap();
        assert!(!cert.nilpotent);
        assert!(!cert.superpatterns_spectrally_arbitrary);
        // f_1 = -x_1 - x_2 and f_2 = x_1 x_2 give Jacobian [[-1,-1],[1,1]]
        // at the identity, which has rank 1
        assert_eq!(cert.jacobian_rank, 1);
    }

    #[test]
    fn block_pair_placement_has_rank_four() {
        let a = RationalMatrix::from_i64_rows(&[
            &[1, -1, 0, 0],
            &[1, -1, 0, 0],
            &[0, 0, 1, -2],
            &[0, 0, 1, -1],
        ]);
        let placement = VariablePlacement::new(vec![(0, 1), (1, 1), (2, 3), (3, 3)]);
        let j = jacobian(&a, &placement).unwrap();
        assert_eq!(j.rank(), 4);
    }

    #[test]
    fn placement_validation_rejects_zeros_and_duplicates() {
        let a = two_cycle();
        let zero_hit = jacobian(&a, &VariablePlacement::new(vec![(0, 0), (0, 1), (1, 1)]));
        assert!(zero_hit.is_ok());
        let mut with_zero = RationalMatrix::from_i64_rows(&[&[1, 0], &[1, -1]]);
        let err = jacobian(&with_zero, &VariablePlacement::new(vec![(0, 1)]));
        assert!(matches!(err, Err(Error::InvalidPlacement { .. })));
        with_zero.set(0, 1, rat(2));
        let dup = jacobian(&with_zero, &VariablePlacement::new(vec![(0, 1), (0, 1)]));
        assert!(matches!(dup, Err(Error::InvalidPlacement { .. })));
        let oob = jacobian(&a, &VariablePlacement::new(vec![(2, 0)]));
        assert!(matches!(oob, Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn placement_search_respects_exclusions_and_reduces() {
        let a = two_cycle();
        let found = find_full_rank_placement(&a, &[(0, 1)]).unwrap().unwrap();
        assert!(!found.contains((0, 1)));
        assert_eq!(found.len(), 2);
        assert_eq!(jacobian(&a, &found).unwrap().rank(), 2);
        let none = find_full_rank_placement(&a, &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn placement_search_reduces_seed_to_minimal_set() {
        let a = bordering_seed();
        let found = find_full_rank_placement(&a, &[]).unwrap().unwrap();
        assert_eq!(found.len(), 4);
        assert_eq!(jacobian(&a, &found).unwrap().rank(), 4);
    }

    #[test]
    fn nonderogatory_analysis_across_shapes() {
        let diag = RationalMatrix::from_i64_rows(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        assert_eq!(nonderogatory_outcome(&diag).unwrap(), CheckOutcome::Passed);

        let shift = RationalMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]);
        assert_eq!(nonderogatory_outcome(&shift).unwrap(), CheckOutcome::Passed);
        assert_eq!(
            nonderogatory_outcome(&RationalMatrix::zeros(2, 2)).unwrap(),
            CheckOutcome::Failed
        );

        let scaled_identity = RationalMatrix::identity(2);
        assert_eq!(
            nonderogatory_outcome(&scaled_identity).unwrap(),
            CheckOutcome::Failed
        );
        let jordan = RationalMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(nonderogatory_outcome(&jordan).unwrap(), CheckOutcome::Passed);

        let two_blocks = RationalMatrix::from_i64_rows(&[&[2, 0, 0], &[0, 2, 1], &[0, 0, 2]]);
        assert_eq!(
            nonderogatory_outcome(&two_blocks).unwrap(),
            CheckOutcome::Failed
        );

        // companion of (z^2+1)^2 has a repeated nonreal pair
        let c = RationalMatrix::from_i64_rows(&[
            &[0, 0, 0, -1],
            &[1, 0, 0, 0],
            &[0, 1, 0, -2],
            &[0, 0, 1, 0],
        ]);
        assert_eq!(nonderogatory_outcome(&c).unwrap(), CheckOutcome::NotExact);
    }

    #[test]
    fn certification_serializes_to_json_and_back() {
        let a = two_cycle();
        let placement = VariablePlacement::new(vec![(0, 0), (1, 0)]);
        let cert = certify_nilpotent_jacobian(&a, &placement).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.contains("\"superpatterns_spectrally_arbitrary\":true"));
        assert!(json.contains("\"placement\":[[0,0],[1,0]]"));
        let back: Certification = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
    }

    fn float_char_poly_coeffs(a: &[Vec<f64>]) -> Vec<f64> {
        let n = a.len();
        let mut aux: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let mut coeffs = Vec::with_capacity(n);
        for k in 1..=n {
            let mut prod = vec![vec![0.0; n]; n];
            for i in 0..n {
                for l in 0..n {
                    let x = a[i][l];
                    if x != 0.0 {
                        for j in 0..n {
                            prod[i][j] += x * aux[l][j];
                        }
                    }
                }
            }
            let tr: f64 = (0..n).map(|i| prod[i][i]).sum();
            let c = -tr / k as f64;
            coeffs.push(c);
            aux = prod;
            for (i, row) in aux.iter_mut().enumerate() {
                row[i] += c;
            }
        }
        coeffs
    }

    fn finite_difference_jacobian(a: &RationalMatrix, placement: &[(usize, usize)]) -> Vec<Vec<f64>> {
        let n = a.rows();
        let base: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let x = a.at(i, j);
                        x.numer().to_string().parse::<f64>().unwrap()
                            / x.denom().to_string().parse::<f64>().unwrap()
                    })
                    .collect()
            })
            .collect();
        let h = 1e-6;
        let mut cols = Vec::new();
        for &(p, q) in placement {
            let mut plus = base.clone();
            plus[p][q] += h;
            let mut minus = base.clone();
            minus[p][q] -= h;
            let fp = float_char_poly_coeffs(&plus);
            let fm = float_char_poly_coeffs(&minus);
            cols.push(
                fp.iter()
                    .zip(&fm)
                    .map(|(a, b)| (a - b) / (2.0 * h))
                    .collect(),
            );
        }
        cols
    }

    #[test]
    fn jacobian_matches_finite_differences_on_seed() {
        let a = bordering_seed();
        let placement = VariablePlacement::all_nonzeros(&sign_of(&a).unwrap());
        let exact = jacobian(&a, &placement).unwrap();
        let fd = finite_difference_jacobian(&a, &placement.positions);
        for (t, col) in fd.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                let e = exact.at(i, t);
                let ef = e.numer().to_string().parse::<f64>().unwrap()
                    / e.denom().to_string().parse::<f64>().unwrap();
                assert!((ef - v).abs() < 1e-6, "entry ({i},{t}): {ef} vs {v}");
            }
        }
    }

    fn sample_entries(n: usize, seed: u64) -> RationalMatrix {
        let mut state = seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
        let mut next = || {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            ((state >> 33) % 11) as i64 - 5
        };
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, ratio(next(), 1 + (next().unsigned_abs() % 3) as i64));
            }
        }
        m
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]

        #[test]
        fn jacobian_agrees_with_finite_differences(seed in 0u64..1000, n in 2usize..5) {
            let a = sample_entries(n, seed);
            let nz: Vec<(usize, usize)> = sign_of(&a).unwrap().nonzero_positions();
            prop_assume!(!nz.is_empty());
            let placement = VariablePlacement::new(nz.clone());
            let exact = jacobian(&a, &placement).unwrap();
            let fd = finite_difference_jacobian(&a, &nz);
            for (t, col) in fd.iter().enumerate() {
                for (i, &v) in col.iter().enumerate() {
                    let e = exact.at(i, t);
                    let ef = e.numer().to_string().parse::<f64>().unwrap()
                        / e.denom().to_string().parse::<f64>().unwrap();
                    prop_assert!((ef - v).abs() < 1e-4 * (1.0 + ef.abs()));
                }
            }
        }

        #[test]
        fn permuting_placement_permutes_columns(swap_a in 0usize..8, swap_b in 0usize..8) {
            let a = bordering_seed();
            let mut positions = sign_of(&a).unwrap().nonzero_positions();
            let j_before = jacobian(&a, &VariablePlacement::new(positions.clone())).unwrap();
            positions.swap(swap_a, swap_b);
            let j_after = jacobian(&a, &VariablePlacement::new(positions)).unwrap();
            for t in 0..8 {
                let original = if t == swap_a {
                    swap_b
                } else if t == swap_b {
                    swap_a
                } else {
                    t
                };
                for r in 0..4 {
                    prop_assert_eq!(j_after.at(r, t), j_before.at(r, original));
                }
            }
        }

        #[test]
        fn dropping_columns_never_raises_rank(mask in 0u32..256) {
            let a = bordering_seed();
            let all = sign_of(&a).unwrap().nonzero_positions();
            let full_rank = jacobian(&a, &VariablePlacement::new(all.clone())).unwrap().rank();
            let subset: Vec<(usize, usize)> = all
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let sub_rank = jacobian(&a, &VariablePlacement::new(subset)).unwrap().rank();
            prop_assert!(sub_rank <= full_rank);
        }

        #[test]
        fn reducible_nilpotent_never_certifies(seed in 0u64..500, n in 3usize..6) {
            let mut a = sample_entries(n, seed);
            for i in 0..n {
                for j in 0..=i {
                    a.set(i, j, Rational::zero());
                }
            }
            prop_assume!(!sign_of(&a).unwrap().nonzero_positions().is_empty());
            let placement = VariablePlacement::all_nonzeros(&sign_of(&a).unwrap());
            let cert = certify_nilpotent_jacobian(&a, &placement).unwrap();
            prop_assert!(cert.nilpotent);
            prop_assert!(!cert.full_rank);
            prop_assert!(!cert.superpatterns_spectrally_arbitrary);
            prop_assert_eq!(cert.irreducible_check, CheckOutcome::Failed);
        }
    }
}
