//! Refined inertia and the inertially arbitrary bordering wrappers.
//!
//! The refined inertia of a real matrix is the tuple (a, b, c1, c2): counts
//! of eigenvalues with positive real part, negative real part, exactly
//! zero, and nonzero pure-imaginary. The zero multiplicity c1 is always
//! read exactly off trailing characteristic-polynomial coefficients. The
//! pure-imaginary count has an exact certification path when the remaining
//! factor is even in z and its polynomial in w = z^2 has degree at most
//! two; anything else falls back to numeric eigenvalues of a balanced
//! companion matrix and is labeled as tolerance-based.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::border::{
    check_equal_index, check_unequal_index, equal_index_border, unequal_index_border,
    EqualIndexReport, UnequalIndexReport,
};
use crate::certify::{certify_nilpotent_jacobian, Certification, VariablePlacement};
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::rational::{rational_to_f64, Rational};
use num_traits::{Signed, Zero};

/// Default tolerance for the numeric eigenvalue fallback.
pub const DEFAULT_INERTIA_TOL: f64 = 1e-9;

/// Eigenvalue counts (a, b, c1, c2): positive real part, negative real
/// part, zero, and nonzero pure-imaginary. Serialized as the 4-tuple.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RefinedInertia {
    pub n_plus: usize,
    pub n_minus: usize,
    pub zero_mult: usize,
    pub imag_count: usize,
}

impl RefinedInertia {
    pub fn new(n_plus: usize, n_minus: usize, zero_mult: usize, imag_count: usize) -> Self {
        RefinedInertia {
            n_plus,
            n_minus,
            zero_mult,
            imag_count,
        }
    }

    pub fn as_tuple(&self) -> (usize, usize, usize, usize) {
        (self.n_plus, self.n_minus, self.zero_mult, self.imag_count)
    }

    pub fn total(&self) -> usize {
        self.n_plus + self.n_minus + self.zero_mult + self.imag_count
    }

    /// The ordinary inertia (a, b, c) with c = c1 + c2.
    pub fn inertia(&self) -> (usize, usize, usize) {
        (self.n_plus, self.n_minus, self.zero_mult + self.imag_count)
    }
}

impl Serialize for RefinedInertia {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_tuple().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RefinedInertia {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (a, b, c1, c2) = <(usize, usize, usize, usize)>::deserialize(d)?;
        Ok(RefinedInertia::new(a, b, c1, c2))
    }
}

/// Refined inertia together with how much of it was certified exactly.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct InertiaCertification {
    pub refined_inertia: RefinedInertia,
    /// Always true: the zero multiplicity comes from exact trailing
    /// coefficients, never from a root finder.
    pub zero_mult_exact: bool,
    pub imaginary_exact: bool,
    pub tolerance_used: Option<f64>,
}

/// Computes the refined inertia of `a`.
///
/// The zero multiplicity is exact. If the nonzero factor q(z) of the
/// characteristic polynomial is even in z and its polynomial in w = z^2
/// has degree at most two with all roots real and negative, the remaining
/// eigenvalues are certified pure imaginary exactly. Otherwise the roots
/// of q are located numerically (balanced companion matrix) and classified
/// by real part against `tol`; a root within `tol` of the imaginary axis
/// counts toward c2, so the four counts always sum to the order.
pub fn refined_inertia(a: &RationalMatrix, tol: f64) -> Result<InertiaCertification> {
    a.order()?;
    let p = a.char_poly()?;
    let c1 = p.zero_root_multiplicity();
    let asc = p.monomial_coeffs();
    let q = &asc[c1..];
    let d = q.len() - 1;
    if d == 0 {
        return Ok(InertiaCertification {
            refined_inertia: RefinedInertia::new(0, 0, c1, 0),
            zero_mult_exact: true,
            imaginary_exact: true,
            tolerance_used: None,
        });
    }
    if even_factor_all_imaginary(q) {
        return Ok(InertiaCertification {
            refined_inertia: RefinedInertia::new(0, 0, c1, d),
            zero_mult_exact: true,
            imaginary_exact: true,
            tolerance_used: None,
        });
    }
    let (a_count, b_count, imag) = classify_roots_numerically(q, tol);
    debug_assert_eq!(a_count + b_count + imag, d);
    Ok(InertiaCertification {
        refined_inertia: RefinedInertia::new(a_count, b_count, c1, imag),
        zero_mult_exact: true,
        imaginary_exact: false,
        tolerance_used: Some(tol),
    })
}

/// Exact certification that every root of the monic polynomial `q`
/// (ascending coefficients, nonzero constant term) is nonzero pure
/// imaginary. Certifies only when q is even in z with w-degree at most
/// two; any other input falls through to the numeric path.
fn even_factor_all_imaginary(q: &[Rational]) -> bool {
    let d = q.len() - 1;
    if d == 0 || d % 2 != 0 {
        return false;
    }
    if q.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
        return false;
    }
    let u: Vec<&Rational> = q.iter().step_by(2).collect();
    match u.len() {
        // w + alpha: the single root is negative iff alpha > 0
        2 => u[0].is_positive(),
        // w^2 + beta w + gamma: both roots real and negative iff the
        // discriminant is nonnegative and beta, gamma are positive
        3 => {
            let beta = u[1];
            let gamma = u[0];
            let disc = beta * beta - crate::rational::rat(4) * gamma;
            !disc.is_negative() && beta.is_positive() && gamma.is_positive()
        }
        _ => false,
    }
}

/// Numeric root classification of a monic polynomial via the balanced
/// companion matrix. Returns (positive, negative, near-axis) counts.
fn classify_roots_numerically(q: &[Rational], tol: f64) -> (usize, usize, usize) {
    let d = q.len() - 1;
    let mut companion = nalgebra::DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        companion[(i, d - 1)] = -rational_to_f64(&q[i]);
    }
    balance_in_place(&mut companion);
    let eigen = companion.complex_eigenvalues();
    let mut pos = 0;
    let mut neg = 0;
    let mut imag = 0;
    for lambda in eigen.iter() {
        if lambda.re > tol {
            pos += 1;
        } else if lambda.re < -tol {
            neg += 1;
        } else {
            imag += 1;
        }
    }
    (pos, neg, imag)
}

/// Diagonal similarity scaling by powers of two so that row and column
/// norms roughly agree; improves eigenvalue accuracy without introducing
/// any rounding of its own.
fn balance_in_place(m: &mut nalgebra::DMatrix<f64>) {
    let n = m.nrows();
    let radix = 2.0f64;
    let sqrdx = radix * radix;
    let mut again = true;
    while again {
        again = false;
        for i in 0..n {
            let mut c: f64 = (0..n).filter(|&j| j != i).map(|j| m[(j, i)].abs()).sum();
            let r: f64 = (0..n).filter(|&j| j != i).map(|j| m[(i, j)].abs()).sum();
            if c != 0.0 && r != 0.0 {
                let mut f = 1.0;
                let s = c + r;
                let mut g = r / radix;
                while c < g {
                    f *= radix;
                    c *= sqrdx;
                }
                g = r * radix;
                while c > g {
                    f /= radix;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    again = true;
                    let g = 1.0 / f;
                    for j in 0..n {
                        m[(i, j)] *= g;
                    }
                    for j in 0..n {
                        m[(j, i)] *= f;
                    }
                }
            }
        }
    }
}

/// Combined full-rank and refined-inertia report. The certified conclusion
/// requires a = b = 0, c1 >= 2, and Jacobian rank n; irreducibility is not
/// required for this conclusion and its flag may legitimately be false.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct InertiaJacobianReport {
    pub certification: Certification,
    pub inertia: InertiaCertification,
    pub hypothesis_satisfied: bool,
    pub superpatterns_inertially_arbitrary: bool,
}

/// Certifies the inertially-arbitrary hypothesis at `a`: refined inertia
/// (0, 0, c1, c2) with c1 >= 2 and a full-rank Jacobian for the placement.
pub fn certify_inertia_jacobian(
    a: &RationalMatrix,
    placement: &VariablePlacement,
) -> Result<InertiaJacobianReport> {
    let certification = certify_nilpotent_jacobian(a, placement)?;
    let inertia = refined_inertia(a, DEFAULT_INERTIA_TOL)?;
    let ri = inertia.refined_inertia;
    let hypothesis_satisfied =
        ri.n_plus == 0 && ri.n_minus == 0 && ri.zero_mult >= 2 && certification.full_rank;
    Ok(InertiaJacobianReport {
        certification,
        inertia,
        hypothesis_satisfied,
        superpatterns_inertially_arbitrary: hypothesis_satisfied,
    })
}

/// Report for one inertial bordering: the base hypothesis, the border
/// preconditions, and the bordered matrix's own certification, whose
/// refined inertia must gain exactly one zero eigenvalue.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct InertialEqualBorderReport {
    pub base: InertiaJacobianReport,
    pub preconditions: EqualIndexReport,
    pub bordered: InertiaJacobianReport,
    pub zero_mult_incremented: bool,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct InertialUnequalBorderReport {
    pub base: InertiaJacobianReport,
    pub preconditions: UnequalIndexReport,
    pub bordered: InertiaJacobianReport,
    pub zero_mult_incremented: bool,
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(what.to_string()))
    }
}

/// Equal-index bordering under the inertial hypotheses. Checks that `a`
/// certifies (refined inertia (0,0,c1,c2), c1 >= 2, full rank with the
/// supplied placement), that the (k, v) preconditions hold, then borders
/// and verifies that the refined inertia gained exactly one zero while the
/// bordered matrix re-certifies full rank with the maximal placement.
pub fn inertial_equal_index_border(
    a: &RationalMatrix,
    k: usize,
    v: usize,
    placement: &VariablePlacement,
) -> Result<(RationalMatrix, InertialEqualBorderReport)> {
    let base = certify_inertia_jacobian(a, placement)?;
    require(
        base.hypothesis_satisfied,
        "base matrix must have refined inertia (0, 0, c1, c2) with c1 >= 2 and a full-rank Jacobian",
    )?;
    let preconditions = check_equal_index(a, k, v)?;
    require(
        preconditions.diagonal_nonzero,
        "diagonal border entry must be nonzero",
    )?;
    require(
        preconditions.row_entry_nonzero,
        "row entry at (k, v) must be nonzero with v distinct from k",
    )?;
    require(
        preconditions.minor_nonsingular,
        "minor deleting row k and column v must be nonsingular",
    )?;
    let b = equal_index_border(a, k)?;
    let bordered_placement = VariablePlacement::all_nonzeros(&crate::pattern::sign_of(&b)?);
    let bordered = certify_inertia_jacobian(&b, &bordered_placement)?;
    let before = base.inertia.refined_inertia;
    let after = bordered.inertia.refined_inertia;
    let zero_mult_incremented = after
        == RefinedInertia::new(0, 0, before.zero_mult + 1, before.imag_count);
    require(
        zero_mult_incremented,
        "bordered matrix must gain exactly one zero eigenvalue",
    )?;
    require(
        bordered.certification.full_rank,
        "bordered matrix must re-certify a full-rank Jacobian",
    )?;
    Ok((
        b,
        InertialEqualBorderReport {
            base,
            preconditions,
            bordered,
            zero_mult_incremented,
        },
    ))
}

/// Unequal-index bordering under the inertial hypotheses; the analogue of
/// [`inertial_equal_index_border`] for border row j, source row k, and
/// border entry b. Here v may coincide with k.
pub fn inertial_unequal_index_border(
    a: &RationalMatrix,
    j: usize,
    k: usize,
    b: &Rational,
    v: usize,
    placement: &VariablePlacement,
) -> Result<(RationalMatrix, InertialUnequalBorderReport)> {
    let base = certify_inertia_jacobian(a, placement)?;
    require(
        base.hypothesis_satisfied,
        "base matrix must have refined inertia (0, 0, c1, c2) with c1 >= 2 and a full-rank Jacobian",
    )?;
    let preconditions = check_unequal_index(a, placement, j, k, v)?;
    require(
        preconditions.border_position_non_jacobian,
        "border position (j, k) must not be a Jacobian variable",
    )?;
    require(
        preconditions.row_entry_nonzero,
        "row entry at (k, v) must be nonzero",
    )?;
    require(
        preconditions.minor_nonsingular,
        "minor deleting row j and column v must be nonsingular",
    )?;
    let bordered_matrix = unequal_index_border(a, j, k, b)?;
    let bordered_placement =
        VariablePlacement::all_nonzeros(&crate::pattern::sign_of(&bordered_matrix)?);
    let bordered = certify_inertia_jacobian(&bordered_matrix, &bordered_placement)?;
    let before = base.inertia.refined_inertia;
    let after = bordered.inertia.refined_inertia;
    let zero_mult_incremented = after
        == RefinedInertia::new(0, 0, before.zero_mult + 1, before.imag_count);
    require(
        zero_mult_incremented,
        "bordered matrix must gain exactly one zero eigenvalue",
    )?;
    require(
        bordered.certification.full_rank,
        "bordered matrix must re-certify a full-rank Jacobian",
    )?;
    Ok((
        bordered_matrix,
        InertialUnequalBorderReport {
            base,
            preconditions,
            bordered,
            zero_mult_incremented,
        },
    ))
}
