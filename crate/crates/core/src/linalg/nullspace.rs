//! Real SVD via one-sided Jacobi, used for nullspace extraction and
//! least-norm solves. One-sided Jacobi keeps the full accuracy of small
//! singular values (no normal-equations squaring), which matters because
//! rank decisions here feed directly into basis dimensions.

use crate::cmatrix::RMatrix;

const MAX_SWEEPS: usize = 60;
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

struct Svd {
    /// worked copy of A with pairwise-orthogonal columns (A·V)
    b: RMatrix,
    /// accumulated right rotations, columns are right singular vectors
    v: RMatrix,
    /// column norms of `b`, i.e. the singular values (unsorted)
    sigma: Vec<f64>,
}

fn one_sided_jacobi(a: &RMatrix) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    let mut b = a.clone();
    let mut v = RMatrix::zeros(n, n);
    for j in 0..n {
        v[(j, j)] = 1.0;
    }
    let eps = f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for r in 0..m {
                    let (x, y) = (b[(r, p)], b[(r, q)]);
                    app += x * x;
                    aqq += y * y;
                    apq += x * y;
                }
                if apq.abs() <= eps * (app * aqq).sqrt() || app == 0.0 || aqq == 0.0 {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..m {
                    let (x, y) = (b[(r, p)], b[(r, q)]);
                    b[(r, p)] = c * x - s * y;
                    b[(r, q)] = s * x + c * y;
                }
                for r in 0..n {
                    let (x, y) = (v[(r, p)], v[(r, q)]);
                    v[(r, p)] = c * x - s * y;
                    v[(r, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|r| b[(r, j)] * b[(r, j)]).sum::<f64>().sqrt())
        .collect();
    Svd { b, v, sigma }
}

/// Singular values of a real matrix, descending.
pub fn singular_values(a: &RMatrix) -> Vec<f64> {
    let mut s = one_sided_jacobi(a).sigma;
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

/// Orthonormal basis of the (numerical) nullspace of a real matrix:
/// right singular vectors whose singular values fall below
/// `tol`·(largest singular value). Deterministic; empty when full rank.
pub fn nullspace_real(a: &RMatrix, tol: Option<f64>) -> Vec<Vec<f64>> {
    let tol = tol.unwrap_or(DEFAULT_RANK_TOL);
    let svd = one_sided_jacobi(a);
    let smax = svd.sigma.iter().cloned().fold(0.0f64, f64::max);
    let mut idx: Vec<usize> = (0..svd.sigma.len())
        .filter(|&j| svd.sigma[j] <= tol * smax)
        .collect();
    // smallest singular value first, index as tiebreak, then a sign
    // convention so the basis does not depend on rotation history
    idx.sort_by(|&i, &j| {
        svd.sigma[i]
            .partial_cmp(&svd.sigma[j])
            .unwrap()
            .then(i.cmp(&j))
    });
    idx.iter()
        .map(|&j| {
            let mut col = svd.v.col(j);
            let lead = col
                .iter()
                .cloned()
                .enumerate()
                .max_by(|(i, x), (j, y)| {
                    x.abs().partial_cmp(&y.abs()).unwrap().then(j.cmp(i))
                })
                .map(|(i, _)| i)
                .unwrap_or(0);
            if col[lead] < 0.0 {
                for x in col.iter_mut() {
                    *x = -*x;
                }
            }
            col
        })
        .collect()
}

/// Minimum-norm least-squares solution of A·x ≈ b through the SVD,
/// truncating singular values below `tol`·(largest).
pub fn pinv_solve(a: &RMatrix, rhs: &[f64], tol: f64) -> Vec<f64> {
    assert_eq!(a.rows(), rhs.len());
    let (m, n) = (a.rows(), a.cols());
    let svd = one_sided_jacobi(a);
    let smax = svd.sigma.iter().cloned().fold(0.0f64, f64::max);
    let mut x = vec![0.0; n];
    for j in 0..n {
        let s = svd.sigma[j];
        if s <= tol * smax || s == 0.0 {
            continue;
        }
        // u_j = b_j / σ_j; coefficient = (u_jᵀ rhs)/σ_j
        let mut dot = 0.0;
        for r in 0..m {
            dot += svd.b[(r, j)] * rhs[r];
        }
        let coef = dot / (s * s);
        for r in 0..n {
            x[r] += coef * svd.v[(r, j)];
        }
    }
    x
}
