//! Dense numerical kernels.
//!
//! Everything here is hand-rolled for small dense problems (dimension
//! ≤ 64, vectorized operators up to 64²): a complex Schur/QR general
//! eigensolver, a complex Hermitian Jacobi eigensolver, a one-sided
//! Jacobi SVD used for real nullspaces and least-norm solves, a real-root
//! polynomial solver, and a guarded bisection utility. The residual
//! contracts (see the individual functions) are what the rest of the
//! library builds on.

mod bisect;
mod eig;
mod hermitian;
mod nullspace;
mod poly;

pub use bisect::bisect;
pub use eig::{eig_general, eig_general_with_vectors};
pub use hermitian::{eig_hermitian, eigvalsh};
pub use nullspace::{nullspace_real, pinv_solve, singular_values};
pub use poly::poly_real_roots;

use crate::cmatrix::{C64, CMatrix};
use crate::error::Error;

/// Eigen-decomposition result.
///
/// `eigenvalues` are sorted by (real part, then imaginary part) ascending
/// so output is deterministic. `eigenvectors`, when present, holds unit
/// right eigenvectors as columns, in the same order. `residual_bound` is
/// max_k ‖A v_k − λ_k v_k‖ / ‖A‖ when vectors were computed, otherwise a
/// machine-precision backward-error estimate.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<C64>,
    pub eigenvectors: Option<CMatrix>,
    pub residual_bound: f64,
}

/// Polynomial with real coefficients, degree descending.
#[derive(Clone, Debug, PartialEq)]
pub struct SecularPolynomial {
    pub coefficients: Vec<f64>,
    pub variable: String,
}

impl SecularPolynomial {
    pub fn new(coefficients: Vec<f64>, variable: &str) -> Result<Self, Error> {
        if coefficients.is_empty() || coefficients[0] == 0.0 {
            return Err(Error::InvalidInput(
                "polynomial needs a nonzero leading coefficient".into(),
            ));
        }
        Ok(SecularPolynomial { coefficients, variable: variable.to_string() })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().fold(0.0, |acc, &c| acc * x + c)
    }
}

pub(crate) fn sort_key(v: &C64) -> (f64, f64) {
    (v.re, v.im)
}

/// Reality test for an eigenvalue: |Im ε| ≤ 1e−9·(1 + |ε|).
pub fn is_real_eig(e: C64) -> bool {
    e.im.abs() <= 1e-9 * (1.0 + e.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::CMatrix;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn random_cmatrix(n: usize, seed: u64) -> CMatrix {
        // xorshift-ish deterministic fill; adequate for invariant tests
        let mut s = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Complex64::new(next(), next());
            }
        }
        m
    }

    fn det_lu(m: &CMatrix) -> Complex64 {
        // LU with partial pivoting, tracking the permutation sign
        let n = m.rows();
        let mut a = m.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let (mut pmax, mut prow) = (0.0, k);
            for i in k..n {
                if a[(i, k)].norm() > pmax {
                    pmax = a[(i, k)].norm();
                    prow = i;
                }
            }
            if pmax == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if prow != k {
                det = -det;
                for j in 0..n {
                    let (x, y) = (a[(k, j)], a[(prow, j)]);
                    a[(k, j)] = y;
                    a[(prow, j)] = x;
                }
            }
            det *= a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / a[(k, k)];
                for j in k + 1..n {
                    let t = a[(k, j)];
                    a[(i, j)] -= f * t;
                }
            }
        }
        det
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn trace_and_det_match_eigenvalues(seed in 0u64..4096) {
            let m = random_cmatrix(6, seed);
            let sp = eig_general(&m).unwrap();
            let tr: Complex64 = sp.eigenvalues.iter().sum();
            prop_assert!((tr - m.trace()).norm() <= 1e-8 * (1.0 + m.trace().norm()));
            let prod: Complex64 = sp.eigenvalues.iter().product();
            let det = det_lu(&m);
            prop_assert!((prod - det).norm() <= 1e-8 * (1.0 + det.norm()));
        }
    }

    #[test]
    fn general_agrees_with_hermitian() {
        for seed in 0..6u64 {
            let a = random_cmatrix(6, seed);
            let h = a.add(&a.adjoint()).scale(Complex64::new(0.5, 0.0));
            let sg = eig_general(&h).unwrap();
            let sh = eig_hermitian(&h).unwrap();
            for (x, y) in sg.eigenvalues.iter().zip(&sh.eigenvalues) {
                assert!((x - y).norm() < 1e-10 * (1.0 + h.norm_fro()));
            }
        }
    }
}
