//! Observables compatible with a metric Θ, and the CPT-like charge.
//!
//! An operator Λ is an observable of the Θ-quantized system when it is
//! self-adjoint in the Θ inner product:
//!
//! ```text
//! Λ† Θ = Θ Λ
//! ```
//!
//! For positive Θ the solutions form a real n²-dimensional space
//! (conjugation by Θ^{1/2} maps them onto the Hermitian matrices). The
//! charge C is the distinguished involution with C² = I, [C, H] = 0 and
//! C·P Hermitian positive definite.

use crate::cmatrix::{C64, CMatrix, RMatrix};
use crate::error::{Error, Result};
use crate::lattice::{build_hamiltonian, build_parity, HamiltonianSpec};
use crate::linalg::{eig_general_with_vectors, eigvalsh, is_real_eig, nullspace_real};

/// Parameters of the closed-form n = 2 observable family, together with
/// the metric/Hamiltonian context (m, a) it lives in.
#[derive(Clone, Copy, Debug)]
pub struct ObservableParamsN2 {
    pub d: f64,
    pub b: f64,
    pub c: f64,
    pub g: f64,
    pub m: f64,
    pub a: f64,
}

/// Residual of the self-adjointness relation for Λ against Θ.
pub fn observable_defect(lambda: &CMatrix, theta: &CMatrix) -> f64 {
    lambda.adjoint().matmul(theta).sub(&theta.matmul(lambda)).norm_fro()
}

/// Real basis of the solutions of Λ†Θ = ΘΛ for a positive metric Θ.
///
/// The relation is real-linear in Λ and its right-hand side lands in the
/// anti-Hermitian matrices, so in coordinates it is an n² × 2n² real
/// system whose nullspace has real dimension n². Elements come back
/// Frobenius-normalized in a deterministic order.
pub fn observable_basis(theta: &CMatrix, tol: f64) -> Result<Vec<CMatrix>> {
    if !theta.is_square() {
        return Err(Error::InvalidDimension("metric must be square".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let n = theta.rows();
    if theta.hermiticity_defect() > 1e-12 * (1.0 + theta.norm_fro()) {
        return Err(Error::ContractViolation("metric must be Hermitian".into()));
    }
    let min_eig = eigvalsh(theta)?.into_iter().fold(f64::INFINITY, f64::min);
    if !(min_eig > tol) {
        return Err(Error::NonPositiveMetric(format!(
            "metric must be positive definite: min eigenvalue {min_eig:.6e} ≤ {tol:.1e}"
        )));
    }
    // real coordinates of a complex matrix: (Re, Im) per entry, row-major
    let dim = 2 * n * n;
    let mut map = RMatrix::zeros(n * n, dim);
    for q in 0..dim {
        let (entry, part) = (q / 2, q % 2);
        let (i, j) = (entry / n, entry % n);
        let mut lam = CMatrix::zeros(n, n);
        lam[(i, j)] = if part == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 1.0) };
        let x = lam.adjoint().matmul(theta).sub(&theta.matmul(&lam)); // anti-Hermitian
        map.set_col(q, &crate::metric::antihermitian_coords(&x));
    }
    let null = nullspace_real(&map, None);
    let mut out = Vec::with_capacity(null.len());
    for coords in &null {
        let mut lam = CMatrix::zeros(n, n);
        for q in 0..dim {
            let (entry, part) = (q / 2, q % 2);
            let (i, j) = (entry / n, entry % n);
            if part == 0 {
                lam[(i, j)] += C64::new(coords[q], 0.0);
            } else {
                lam[(i, j)] += C64::new(0.0, coords[q]);
            }
        }
        let defect = observable_defect(&lam, theta);
        if defect > tol {
            return Err(Error::ConstructionFailure(format!(
                "candidate observable violates self-adjointness: defect {defect:.3e} > {tol:.1e}"
            )));
        }
        out.push(lam);
    }
    Ok(out)
}

/// Closed-form n = 2 observable
///
/// ```text
/// Λ = (1/a)·[[D·a − b − c + i·g·a,  g − b·m + i·b·a],
///            [g + c·m + i·c·a,      D·a − i·g·a    ]]
/// ```
///
/// self-adjoint against every positive multiple of the n = 2 metric with
/// parameters (m, a). The parametrization degenerates at a = 0.
pub fn observable_n2(p: &ObservableParamsN2) -> Result<CMatrix> {
    if p.a == 0.0 {
        return Err(Error::SingularParametrization(
            "the n = 2 observable family has a 1/a prefactor; a must be nonzero".into(),
        ));
    }
    let (d, b, c, g, m, a) = (p.d, p.b, p.c, p.g, p.m, p.a);
    let mut lam = CMatrix::zeros(2, 2);
    lam[(0, 0)] = C64::new(d * a - b - c, g * a).scale(1.0 / a);
    lam[(0, 1)] = C64::new(g - b * m, b * a).scale(1.0 / a);
    lam[(1, 0)] = C64::new(g + c * m, c * a).scale(1.0 / a);
    lam[(1, 1)] = C64::new(d * a, -g * a).scale(1.0 / a);
    Ok(lam)
}

/// The unique charge of the two-site model:
///
/// ```text
/// C = k·[[i·a, 1], [1, −i·a]],   k = 1/√(1 − a²)
/// ```
///
/// Satisfies C² = I, [C, H(2)(a)] = 0, and C·P Hermitian positive
/// definite; defined only inside the reality interval |a| < 1.
pub fn cpt_charge_n2(a: f64) -> Result<CMatrix> {
    if !(a.abs() < 1.0) {
        return Err(Error::OutsideReality(format!(
            "the two-site charge exists for |a| < 1 only, got a = {a}"
        )));
    }
    let k = 1.0 / (1.0 - a * a).sqrt();
    let mut c = CMatrix::zeros(2, 2);
    c[(0, 0)] = C64::new(0.0, k * a);
    c[(0, 1)] = C64::new(k, 0.0);
    c[(1, 0)] = C64::new(k, 0.0);
    c[(1, 1)] = C64::new(0.0, -k * a);
    Ok(c)
}

/// Charge for general even n from the biorthonormal eigensystem:
/// C = Σ_k s_k · r_k l_k† with signs s_k = ±1 chosen so that C·P is
/// positive definite. At a = 0 the Hamiltonian is Hermitian and C = P.
pub fn cpt_charge_general(spec: &HamiltonianSpec) -> Result<CMatrix> {
    let n = spec.n;
    let p = build_parity(n)?;
    if spec.a == 0.0 {
        return Ok(p);
    }
    let h = build_hamiltonian(spec)?;
    let sp = eig_general_with_vectors(&h)?;
    let complex = sp.eigenvalues.iter().filter(|e| !is_real_eig(**e)).count();
    if complex > 0 {
        return Err(Error::OutsideReality(format!(
            "{complex} complex eigenvalues at (n = {n}, a = {}, z = {}): no charge exists there",
            spec.a, spec.z
        )));
    }
    for w in sp.eigenvalues.windows(2) {
        if (w[1].re - w[0].re).abs() < 1e-10 {
            return Err(Error::ConstructionFailure(format!(
                "nearly degenerate eigenvalues {} and {}: biorthonormalization is ill-posed",
                w[0].re, w[1].re
            )));
        }
    }
    let r = sp.eigenvectors.as_ref().expect("vectors requested");
    // columns of L are the left eigenvectors, biorthonormal to R
    let l = r
        .inverse()
        .ok_or_else(|| Error::ConstructionFailure("eigenvector matrix is singular".into()))?
        .adjoint();
    let mut c = CMatrix::zeros(n, n);
    for k in 0..n {
        let rk = r.col(k);
        let lk = l.col(k);
        let overlap: C64 = lk.iter().zip(p.matvec(&rk)).map(|(x, y)| x.conj() * y).sum();
        if overlap.re.abs() < 1e-12 {
            return Err(Error::ConstructionFailure(format!(
                "sign of eigenvector {k} is undetermined: ⟨l|P|r⟩ = {overlap}"
            )));
        }
        let s = overlap.re.signum();
        for i in 0..n {
            for j in 0..n {
                c[(i, j)] += rk[i] * lk[j].conj().scale(s);
            }
        }
    }
    verify_charge(&c, &h, &p)?;
    Ok(c)
}

fn verify_charge(c: &CMatrix, h: &CMatrix, p: &CMatrix) -> Result<()> {
    let n = c.rows();
    let scale = 1.0 + c.norm_fro();
    let invol = c.matmul(c).sub(&CMatrix::identity(n)).norm_fro();
    let comm = c.matmul(h).sub(&h.matmul(c)).norm_fro();
    let theta = c.matmul(p);
    let herm = theta.hermiticity_defect();
    if invol > 1e-10 * scale * scale || comm > 1e-10 * scale * h.norm_fro() || herm > 1e-10 * scale
    {
        return Err(Error::ConstructionFailure(format!(
            "charge checks failed: ‖C²−I‖ = {invol:.3e}, ‖[C,H]‖ = {comm:.3e}, ‖CP−(CP)†‖ = {herm:.3e}"
        )));
    }
    let sym = theta.add(&theta.adjoint()).scale(C64::new(0.5, 0.0));
    let min_eig = eigvalsh(&sym)?.into_iter().fold(f64::INFINITY, f64::min);
    if !(min_eig > 0.0) {
        return Err(Error::ConstructionFailure(format!(
            "no sign assignment makes C·P positive definite (min eigenvalue {min_eig:.3e})"
        )));
    }
    Ok(())
}
