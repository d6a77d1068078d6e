//! Hermitian eigensolver: cyclic complex Jacobi rotations.

use super::Spectrum;
use crate::cmatrix::{C64, CMatrix};
use crate::error::Error;

const MAX_SWEEPS: usize = 64;

fn off_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix. Rejects inputs with
/// ‖m − m†‖ > 1e−12·‖m‖, returns real eigenvalues in ascending order and
/// an orthonormal eigenvector matrix with residuals well below 1e−12·‖m‖.
pub fn eig_hermitian(m: &CMatrix) -> Result<Spectrum, Error> {
    jacobi(m, true)
}

/// Eigenvalues only; same contract as [`eig_hermitian`].
pub fn eigvalsh(m: &CMatrix) -> Result<Vec<f64>, Error> {
    Ok(jacobi(m, false)?.eigenvalues.iter().map(|z| z.re).collect())
}

fn jacobi(m: &CMatrix, want_vecs: bool) -> Result<Spectrum, Error> {
    if !m.is_square() {
        return Err(Error::InvalidInput(format!(
            "hermitian eigensolver needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let norm = m.norm_fro();
    let defect = m.hermiticity_defect();
    if defect > 1e-12 * norm.max(f64::MIN_POSITIVE) {
        return Err(Error::ContractViolation(format!(
            "matrix is not hermitian: ‖m − m†‖ = {:.3e} exceeds 1e-12·‖m‖ = {:.3e}",
            defect,
            1e-12 * norm
        )));
    }
    // work on the exactly hermitian part so rounding in the input cannot leak
    let mut a = m.add(&m.adjoint()).scale(C64::new(0.5, 0.0));
    let mut v = CMatrix::identity(n);
    let stop = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
    let skip = stop / ((n * n).max(1) as f64);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= skip {
                    continue;
                }
                rotated = true;
                let phase = apq / mag;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let sp = phase * s; // J[p][q] entry; J[q][p] = −conj(sp)
                // rows: A ← J† A
                for b in 0..n {
                    let (x, y) = (a[(p, b)], a[(q, b)]);
                    a[(p, b)] = c * x - sp * y;
                    a[(q, b)] = sp.conj() * x + c * y;
                }
                // columns: A ← A J
                for r in 0..n {
                    let (x, y) = (a[(r, p)], a[(r, q)]);
                    a[(r, p)] = c * x - sp.conj() * y;
                    a[(r, q)] = sp * x + c * y;
                }
                if want_vecs {
                    for r in 0..n {
                        let (x, y) = (v[(r, p)], v[(r, q)]);
                        v[(r, p)] = c * x - sp.conj() * y;
                        v[(r, q)] = sp * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let residual = off_norm(&a) / norm.max(f64::MIN_POSITIVE);
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
    pairs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let eigenvalues: Vec<C64> = pairs.iter().map(|&(e, _)| C64::new(e, 0.0)).collect();
    let eigenvectors = if want_vecs {
        let mut out = CMatrix::zeros(n, n);
        for (dst, &(_, src)) in pairs.iter().enumerate() {
            out.set_col(dst, &v.col(src));
        }
        Some(out)
    } else {
        None
    };
    Ok(Spectrum { eigenvalues, eigenvectors, residual_bound: residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_closed_form() {
        // [[1, m−ia], [m+ia, 1]] has eigenvalues 1 ± sqrt(m² + a²)
        let (mm, aa) = (0.4, 0.3);
        let mut h = CMatrix::zeros(2, 2);
        h[(0, 0)] = C64::new(1.0, 0.0);
        h[(0, 1)] = C64::new(mm, -aa);
        h[(1, 0)] = C64::new(mm, aa);
        h[(1, 1)] = C64::new(1.0, 0.0);
        let s = eig_hermitian(&h).unwrap();
        let r = (mm * mm + aa * aa).sqrt();
        assert!((s.eigenvalues[0].re - (1.0 - r)).abs() < 1e-14);
        assert!((s.eigenvalues[1].re - (1.0 + r)).abs() < 1e-14);
        // eigenvector residual
        let v = s.eigenvectors.as_ref().unwrap();
        for k in 0..2 {
            let col = v.col(k);
            let hv = h.matvec(&col);
            let lam = s.eigenvalues[k];
            let res: f64 = hv.iter().zip(&col).map(|(x, y)| (x - lam * y).norm_sqr()).sum::<f64>().sqrt();
            assert!(res < 1e-13);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut h = CMatrix::zeros(2, 2);
        h[(0, 1)] = C64::new(1.0, 0.0);
        h[(1, 0)] = C64::new(0.5, 0.0);
        assert!(matches!(eig_hermitian(&h), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn larger_hermitian_residual() {
        let n = 10;
        let mut h = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let re = ((i * 7 + j * 3 + 1) % 13) as f64 / 13.0 - 0.5;
                let im = if i == j { 0.0 } else { ((i * 5 + j * 11 + 2) % 17) as f64 / 17.0 - 0.5 };
                h[(i, j)] = C64::new(re, im);
                h[(j, i)] = C64::new(re, -im);
            }
        }
        let s = eig_hermitian(&h).unwrap();
        assert!(s.residual_bound < 1e-13);
        // orthonormality of eigenvectors
        let v = s.eigenvectors.as_ref().unwrap();
        let g = v.adjoint().matmul(v);
        let id = CMatrix::identity(n);
        assert!(g.sub(&id).norm_fro() < 1e-12);
    }
}
