//! The model family: tridiagonal lattice Hamiltonians H(a, z) with an
//! antisymmetrically graded imaginary diagonal, their parity matrix, and
//! the grid-to-coupling map.
//!
//! For dimension N = 2K the matrix is
//!
//! ```text
//! H = 2·I − (tridiagonal 1-band) + i·a·diag(−(N−1)^z, …, −3^z, −1, +1, +3^z, …, +(N−1)^z)
//! ```
//!
//! so the imaginary profile is odd under reflection through the center,
//! giving P H P = conj(H) with P the antidiagonal involution.

use crate::cmatrix::{C64, CMatrix};
use crate::error::{Error, Result};

/// Identifies one member of the Hamiltonian family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianSpec {
    /// Matrix dimension N = 2K; must be even and ≥ 2.
    pub n: usize,
    /// Coupling strength multiplying the imaginary diagonal.
    pub a: f64,
    /// Grading exponent: site j (counted from the center) carries weight
    /// (2j − 1)^z.
    pub z: f64,
}

impl HamiltonianSpec {
    pub fn new(n: usize, a: f64, z: f64) -> Result<Self> {
        validate_dim(n)?;
        if !a.is_finite() || !z.is_finite() {
            return Err(Error::InvalidInput(format!(
                "coupling and exponent must be finite, got a = {a}, z = {z}"
            )));
        }
        Ok(HamiltonianSpec { n, a, z })
    }
}

/// Uniform grid of `n` interior points on (−Λ, Λ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub lambda: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn new(lambda: f64, n: usize) -> Result<Self> {
        if !(lambda > 0.0) || n == 0 {
            return Err(Error::InvalidInput(format!(
                "grid needs lambda > 0 and n ≥ 1, got lambda = {lambda}, n = {n}"
            )));
        }
        Ok(GridSpec { lambda, n })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.lambda / (self.n as f64 + 1.0)
    }
}

fn validate_dim(n: usize) -> Result<()> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidDimension(format!(
            "dimension must be even and at least 2, got {n}"
        )));
    }
    Ok(())
}

/// Diagonal imaginary weights ordered row by row: −(N−1)^z … −1, +1 … +(N−1)^z.
pub fn diagonal_weights(n: usize, z: f64) -> Result<Vec<f64>> {
    validate_dim(n)?;
    let k = n / 2;
    let mut w = Vec::with_capacity(n);
    for r in 0..n {
        let (sign, j) = if r < k { (-1.0, k - r) } else { (1.0, r - k + 1) };
        w.push(sign * ((2 * j - 1) as f64).powf(z));
    }
    Ok(w)
}

/// Build the tridiagonal Hamiltonian for `spec`.
pub fn build_hamiltonian(spec: &HamiltonianSpec) -> Result<CMatrix> {
    let w = diagonal_weights(spec.n, spec.z)?;
    let n = spec.n;
    let mut h = CMatrix::zeros(n, n);
    for r in 0..n {
        h[(r, r)] = C64::new(2.0, spec.a * w[r]);
        if r + 1 < n {
            h[(r, r + 1)] = C64::new(-1.0, 0.0);
            h[(r + 1, r)] = C64::new(-1.0, 0.0);
        }
    }
    Ok(h)
}

/// Antidiagonal parity involution: P[i][j] = 1 iff i + j = n − 1.
pub fn build_parity(n: usize) -> Result<CMatrix> {
    validate_dim(n)?;
    let mut p = CMatrix::zeros(n, n);
    for i in 0..n {
        p[(i, n - 1 - i)] = C64::new(1.0, 0.0);
    }
    Ok(p)
}

/// Coupling associated with a discretization grid: a = h⁵/8 with
/// h = 2Λ/(n+1).
pub fn coupling_from_grid(grid: &GridSpec) -> f64 {
    grid.spacing().powi(5) / 8.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_site_matrix() {
        let h = build_hamiltonian(&HamiltonianSpec::new(2, 0.7, 3.0).unwrap()).unwrap();
        assert_eq!(h[(0, 0)], C64::new(2.0, -0.7));
        assert_eq!(h[(1, 1)], C64::new(2.0, 0.7));
        assert_eq!(h[(0, 1)], C64::new(-1.0, 0.0));
        assert_eq!(h[(1, 0)], C64::new(-1.0, 0.0));
    }

    #[test]
    fn four_site_diagonal_grading() {
        let h = build_hamiltonian(&HamiltonianSpec::new(4, 0.1, 3.0).unwrap()).unwrap();
        assert!((h[(0, 0)] - C64::new(2.0, -2.7)).norm() < 1e-15); // 27·0.1
        assert!((h[(1, 1)] - C64::new(2.0, -0.1)).norm() < 1e-15);
        assert!((h[(2, 2)] - C64::new(2.0, 0.1)).norm() < 1e-15);
        assert!((h[(3, 3)] - C64::new(2.0, 2.7)).norm() < 1e-15);
    }

    #[test]
    fn pt_symmetry_and_trace() {
        for &(n, a, z) in &[(2, 0.4, 1.0), (6, 0.05, 2.5), (10, 0.3, 0.0)] {
            let h = build_hamiltonian(&HamiltonianSpec::new(n, a, z).unwrap()).unwrap();
            let p = build_parity(n).unwrap();
            let php = p.matmul(&h).matmul(&p);
            assert!(php.sub(&h.conj()).norm_fro() < 1e-14);
            assert!((h.trace() - C64::new(2.0 * n as f64, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn parity_is_involution() {
        for n in [2usize, 4, 8] {
            let p = build_parity(n).unwrap();
            let id = CMatrix::identity(n);
            assert_eq!(p.matmul(&p), id);
            assert_eq!(p.transpose(), p);
        }
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(matches!(HamiltonianSpec::new(3, 0.1, 1.0), Err(Error::InvalidDimension(_))));
        assert!(matches!(HamiltonianSpec::new(0, 0.1, 1.0), Err(Error::InvalidDimension(_))));
        assert!(matches!(build_parity(5), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn grid_coupling() {
        let g = GridSpec::new(1.0, 1).unwrap(); // h = 1
        assert!((coupling_from_grid(&g) - 0.125).abs() < 1e-15);
        let g = GridSpec::new(1.0, 9).unwrap(); // h = 0.2
        assert!((coupling_from_grid(&g) - 0.2f64.powi(5) / 8.0).abs() < 1e-18);
        let g = GridSpec::new(3.0, 2).unwrap(); // h = 2
        assert!((coupling_from_grid(&g) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn free_laplacian_at_zero_coupling() {
        use crate::linalg::eig_general;
        let n = 8usize;
        let h = build_hamiltonian(&HamiltonianSpec::new(n, 0.0, 3.0).unwrap()).unwrap();
        let s = eig_general(&h).unwrap();
        for (k, e) in s.eigenvalues.iter().enumerate() {
            let expect = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((e.re - expect).abs() < 1e-12, "k={k}: {} vs {}", e.re, expect);
            assert!(e.im.abs() < 1e-12);
        }
    }
}
