//! Floating-point targeting of characteristic polynomials over a certified
//! pattern.
//!
//! A full-rank Jacobian at the seed makes the coefficient map locally onto,
//! so nearby polynomials are reachable by adjusting only the placed entries.
//! This module drives that map numerically: damped Gauss-Newton steps on the
//! placed entries, backtracked so every entry keeps the sign its pattern
//! prescribes, with a staged walk from the zero polynomial as fallback for
//! targets the direct solve cannot reach.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::certify::{jacobian, VariablePlacement};
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::pattern::{is_realization, Sign, SignPattern};
use crate::rational::rational_to_f64;

/// Tuning for [`realize_polynomial`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealizeOptions {
    /// Success threshold on the max absolute coefficient error.
    pub tol: f64,
    /// Iteration budget, applied separately to the direct solve and to each
    /// fallback stage.
    pub max_iters: usize,
    /// Number of segments walked from the zero polynomial to the target
    /// when the direct solve fails.
    pub homotopy_stages: usize,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions {
            tol: 1e-10,
            max_iters: 100,
            homotopy_stages: 10,
        }
    }
}

/// Outcome of a successful realization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealizationResult {
    pub matrix: Vec<Vec<f64>>,
    /// Max absolute difference between the achieved and requested
    /// coefficients, recomputed from `matrix`.
    pub residual: f64,
    pub iterations: usize,
    /// Whether every entry of `matrix` carries the sign its pattern
    /// prescribes.
    pub sign_ok: bool,
}

fn dmatrix_from(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

/// Coefficients `[f_1, .., f_n]` of `det(zI - A) = z^n + f_1 z^(n-1) + ...`,
/// by the same trace recurrence as the exact route.
pub fn float_char_poly(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let a = dmatrix_from(a);
    let mut coeffs = Vec::with_capacity(n);
    let mut aux = DMatrix::<f64>::identity(n, n);
    for k in 1..=n {
        let m = &a * aux;
        let c = -m.trace() / k as f64;
        aux = m;
        for i in 0..n {
            aux[(i, i)] += c;
        }
        coeffs.push(c);
    }
    coeffs
}

/// Interpolating polynomial (ascending coefficients) through the values
/// `ys[t]` at the nodes `t = 0, 1, ..`.
fn newton_interpolate_f(ys: &[f64]) -> Vec<f64> {
    let n = ys.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / level as f64;
        }
    }
    let mut result = vec![0.0; n];
    let mut basis = vec![1.0];
    for (k, coeff) in dd.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            result[i] += coeff * b;
        }
        if k + 1 < n {
            let root = k as f64;
            let mut next = vec![0.0; basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i] -= root * b;
                next[i + 1] += b;
            }
            basis = next;
        }
    }
    result
}

/// Float Jacobian of the coefficient map over the placed entries, laid out
/// like the exact [`jacobian`]: row i differentiates the coefficient of
/// `z^(n-1-i)`, column t belongs to `placement.positions[t]`.
pub fn float_jacobian(a: &[Vec<f64>], placement: &VariablePlacement) -> Vec<Vec<f64>> {
    let n = a.len();
    let shifted: Vec<DMatrix<f64>> = (0..n)
        .map(|z| {
            let mut m = -dmatrix_from(a);
            for i in 0..n {
                m[(i, i)] += z as f64;
            }
            m
        })
        .collect();
    let mut jac = vec![vec![0.0; placement.len()]; n];
    for (t, &(p, q)) in placement.positions.iter().enumerate() {
        let values: Vec<f64> = shifted
            .iter()
            .map(|m| {
                if n == 1 {
                    1.0
                } else {
                    m.clone().remove_row(p).remove_column(q).determinant()
                }
            })
            .collect();
        let mut g = newton_interpolate_f(&values);
        g.resize(n.max(1), 0.0);
        let flip = (p + q) % 2 == 0;
        for (i, row) in jac.iter_mut().enumerate() {
            let v = g[n - 1 - i];
            row[t] = if flip { -v } else { v };
        }
    }
    jac
}

fn max_abs_diff(f: &[f64], target: &[f64]) -> f64 {
    f.iter()
        .zip(target)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

struct Solver<'a> {
    base: &'a [Vec<f64>],
    placement: &'a VariablePlacement,
    signs: Vec<Sign>,
    tol: f64,
    max_iters: usize,
}

impl Solver<'_> {
    fn fill(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut m = self.base.to_vec();
        for (t, &(p, q)) in self.placement.positions.iter().enumerate() {
            m[p][q] = x[t];
        }
        m
    }

    fn in_orthant(&self, x: &[f64]) -> bool {
        x.iter().zip(&self.signs).all(|(v, s)| match s {
            Sign::Plus => *v > 0.0,
            Sign::Minus => *v < 0.0,
            Sign::Zero => *v == 0.0,
        })
    }

    /// Damped Gauss-Newton from `x` toward `target`; `x` holds the solution
    /// on success. Steps are the minimal-norm solutions of the linearized
    /// system, halved until they both respect the orthant and reduce the
    /// residual.
    fn drive(&self, x: &mut Vec<f64>, target: &[f64], iterations: &mut usize) -> Result<()> {
        let n = self.base.len();
        let mut done = 0;
        loop {
            let current = self.fill(x);
            let f = float_char_poly(&current);
            let residual = max_abs_diff(&f, target);
            if residual < self.tol {
                return Ok(());
            }
            if done >= self.max_iters {
                return Err(Error::Nonconvergence {
                    iterations: *iterations,
                    residual,
                });
            }
            let jac = float_jacobian(&current, self.placement);
            let jac = DMatrix::from_fn(n, self.placement.len(), |i, j| jac[i][j]);
            let rhs = DVector::from_fn(n, |i, _| target[i] - f[i]);
            let svd = jac.svd(true, true);
            let dx = svd
                .solve(&rhs, 1e-12)
                .expect("SVD solve with both factors requested");
            let mut scale = 1.0;
            let mut stepped = false;
            let mut entered_orthant = false;
            for _ in 0..60 {
                let candidate: Vec<f64> = x
                    .iter()
                    .zip(dx.iter())
                    .map(|(xi, di)| xi + scale * di)
                    .collect();
                if !self.in_orthant(&candidate) {
                    scale *= 0.5;
                    continue;
                }
                entered_orthant = true;
                let trial = max_abs_diff(&float_char_poly(&self.fill(&candidate)), target);
                if trial < residual {
                    *x = candidate;
                    stepped = true;
                    break;
                }
                scale *= 0.5;
            }
            done += 1;
            *iterations += 1;
            if !stepped {
                if !entered_orthant {
                    return Err(Error::OrthantViolation(format!(
                        "no step scale keeps all {} variables on their signs",
                        self.signs.len()
                    )));
                }
                return Err(Error::Nonconvergence {
                    iterations: *iterations,
                    residual,
                });
            }
        }
    }
}

/// Finds a float realization of `pattern` whose characteristic polynomial
/// has the requested coefficients, moving only the placed entries of `seed`.
///
/// `target[i]` is the coefficient of `z^(n-1-i)`, matching the exact
/// characteristic polynomial layout. Entries outside the placement stay at
/// their seed values, and pattern zeros are never touched. The direct solve
/// runs first; on failure the target is approached along the segment from
/// the zero polynomial in `opts.homotopy_stages` pieces.
pub fn realize_polynomial(
    pattern: &SignPattern,
    seed: &RationalMatrix,
    placement: &VariablePlacement,
    target: &[f64],
    opts: &RealizeOptions,
) -> Result<RealizationResult> {
    let n = pattern.order();
    if seed.order()? != n {
        return Err(Error::Dimension(format!(
            "seed order {} does not match pattern order {n}",
            seed.order()?
        )));
    }
    if target.len() != n {
        return Err(Error::Dimension(format!(
            "target has {} coefficients for order {n}",
            target.len()
        )));
    }
    if !is_realization(seed, pattern)? {
        return Err(Error::Precondition(
            "seed must realize the pattern".to_string(),
        ));
    }
    placement.validate_against(seed)?;
    if jacobian(seed, placement)?.rank() != n {
        return Err(Error::Precondition(
            "seed does not certify full Jacobian rank under this placement".to_string(),
        ));
    }

    let base: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| rational_to_f64(seed.at(i, j))).collect())
        .collect();
    let start: Vec<f64> = placement
        .positions
        .iter()
        .map(|&(p, q)| base[p][q])
        .collect();
    let signs = placement
        .positions
        .iter()
        .map(|&(p, q)| pattern.at(p, q))
        .collect();
    let solver = Solver {
        base: &base,
        placement,
        signs,
        tol: opts.tol,
        max_iters: opts.max_iters,
    };

    let mut iterations = 0;
    let mut x = start.clone();
    if solver.drive(&mut x, target, &mut iterations).is_err() {
        x = start;
        let stages = opts.homotopy_stages.max(1);
        for stage in 1..=stages {
            let fraction = stage as f64 / stages as f64;
            let waypoint: Vec<f64> = target.iter().map(|c| c * fraction).collect();
            solver.drive(&mut x, &waypoint, &mut iterations)?;
        }
    }

    let matrix = solver.fill(&x);
    let residual = max_abs_diff(&float_char_poly(&matrix), target);
    let sign_ok = (0..n).all(|i| {
        (0..n).all(|j| match pattern.at(i, j) {
            Sign::Plus => matrix[i][j] > 0.0,
            Sign::Minus => matrix[i][j] < 0.0,
            Sign::Zero => matrix[i][j] == 0.0,
        })
    });
    Ok(RealizationResult {
        matrix,
        residual,
        iterations,
        sign_ok,
    })
}
