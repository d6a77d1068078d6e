//! Hermitian intertwiners ("pseudometrics") of H: solutions Θ = Θ† of
//!
//! ```text
//! H† Θ = Θ H
//! ```
//!
//! For a real nondegenerate spectrum the solution space has real
//! dimension n. This module computes that family numerically (as the
//! nullspace of the vectorized intertwining map), provides the closed
//! forms at n = 2, 4, 6, singles out the canonical unit-diagonal member
//! Θ₀, locates the positivity boundary β where Θ₀ stops being a metric,
//! and builds the small-a linearization Θ(a) = I + a·T + O(a²) whose
//! integer secular polynomial predicts β.

use crate::cmatrix::{C64, CMatrix, RMatrix};
use crate::error::{Error, Result};
use crate::lattice::{build_hamiltonian, diagonal_weights, HamiltonianSpec};
use crate::linalg::{
    eig_general, eig_hermitian, eigvalsh, is_real_eig, nullspace_real, pinv_solve,
    poly_real_roots, SecularPolynomial,
};

/// Basis of the solution space of H†Θ = ΘH, trace-orthonormal Hermitian
/// matrices in a deterministic order.
#[derive(Clone, Debug)]
pub struct PseudometricFamily {
    pub spec: HamiltonianSpec,
    pub basis: Vec<CMatrix>,
    /// Rank tolerance used for the nullspace decision; each basis element
    /// satisfies ‖H†B − BH‖ ≤ tol·‖H‖·‖B‖.
    pub tol: f64,
    /// Realized residual ‖H†B − BH‖/(‖H‖·‖B‖) per element.
    pub residuals: Vec<f64>,
    /// Present when the spectrum was complex or degenerate, in which case
    /// the family dimension may differ from n.
    pub warning: Option<String>,
}

impl PseudometricFamily {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Two-parameter family at n = 2.
#[derive(Clone, Copy, Debug)]
pub struct N2MetricParams {
    pub k: f64,
    pub m: f64,
}

impl N2MetricParams {
    /// Angle parametrization of the positivity domain: β, γ ∈ (0, π) give
    /// m = cos β · cos γ together with the coupling a = cos β · sin γ, so
    /// m² + a² = cos²β < 1 automatically. Returns (params, a).
    pub fn from_angles(k: f64, beta: f64, gamma: f64) -> (Self, f64) {
        let m = beta.cos() * gamma.cos();
        let a = beta.cos() * gamma.sin();
        (N2MetricParams { k, m }, a)
    }
}

/// Four-parameter family at n = 4.
#[derive(Clone, Copy, Debug)]
pub struct N4PseudometricParams {
    pub k: f64,
    pub m: f64,
    pub r: f64,
    pub h: f64,
}

// ---------------------------------------------------------------------
// Hermitian vectorization
// ---------------------------------------------------------------------

/// Trace-orthonormal basis of the Hermitian matrices: n diagonal units,
/// then for each j < k the symmetric and antisymmetric off-diagonal
/// pairs, row-major order.
pub(crate) fn hermitian_basis(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        let mut b = CMatrix::zeros(n, n);
        b[(j, j)] = C64::new(1.0, 0.0);
        out.push(b);
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..n {
        for k in j + 1..n {
            let mut b = CMatrix::zeros(n, n);
            b[(j, k)] = C64::new(s, 0.0);
            b[(k, j)] = C64::new(s, 0.0);
            out.push(b);
            let mut b = CMatrix::zeros(n, n);
            b[(j, k)] = C64::new(0.0, s);
            b[(k, j)] = C64::new(0.0, -s);
            out.push(b);
        }
    }
    out
}

/// Coordinates of a Hermitian matrix in [`hermitian_basis`] order.
fn hermitian_coords(y: &CMatrix) -> Vec<f64> {
    let n = y.rows();
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        out.push(y[(j, j)].re);
    }
    let s = std::f64::consts::SQRT_2;
    for j in 0..n {
        for k in j + 1..n {
            out.push(s * y[(j, k)].re);
            out.push(s * y[(j, k)].im);
        }
    }
    out
}

/// Coordinates of an anti-Hermitian matrix X, using that −i·X is
/// Hermitian.
pub(crate) fn antihermitian_coords(x: &CMatrix) -> Vec<f64> {
    hermitian_coords(&x.scale(C64::new(0.0, -1.0)))
}

fn from_hermitian_coords(c: &[f64], basis: &[CMatrix]) -> CMatrix {
    let n = basis[0].rows();
    let mut out = CMatrix::zeros(n, n);
    for (ci, bi) in c.iter().zip(basis) {
        out = out.add(&bi.scale(C64::new(*ci, 0.0)));
    }
    out
}

pub(crate) fn intertwining_defect(h: &CMatrix, theta: &CMatrix) -> f64 {
    h.adjoint().matmul(theta).sub(&theta.matmul(h)).norm_fro()
}

// ---------------------------------------------------------------------
// numeric family
// ---------------------------------------------------------------------

/// Solve H†Θ = ΘH over Hermitian Θ. The intertwining map sends Hermitian
/// to anti-Hermitian matrices, so in coordinates it is a real n²×n²
/// matrix whose nullspace is the family. Returns a dimension warning
/// (instead of an error) when the spectrum is complex or degenerate.
pub fn dieudonne_basis(spec: &HamiltonianSpec, tol: f64) -> Result<PseudometricFamily> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("rank tolerance must be positive, got {tol}")));
    }
    let h = build_hamiltonian(spec)?;
    let n = spec.n;
    let warning = spectrum_warning(&h, spec)?;
    let basis = hermitian_basis(n);
    let mut map = RMatrix::zeros(n * n, n * n);
    for (q, b) in basis.iter().enumerate() {
        let x = h.adjoint().matmul(b).sub(&b.matmul(&h)); // anti-Hermitian
        map.set_col(q, &antihermitian_coords(&x));
    }
    let null = nullspace_real(&map, Some(tol));
    let hnorm = h.norm_fro();
    let mut family = Vec::with_capacity(null.len());
    let mut residuals = Vec::with_capacity(null.len());
    for c in &null {
        let theta = from_hermitian_coords(c, &basis);
        let res = intertwining_defect(&h, &theta) / (hnorm * theta.norm_fro());
        family.push(theta);
        residuals.push(res);
    }
    Ok(PseudometricFamily { spec: *spec, basis: family, tol, residuals, warning })
}

fn spectrum_warning(h: &CMatrix, spec: &HamiltonianSpec) -> Result<Option<String>> {
    let eigs = eig_general(h)?.eigenvalues;
    let complex = eigs.iter().filter(|e| !is_real_eig(**e)).count();
    if complex > 0 {
        return Ok(Some(format!(
            "{complex} complex eigenvalues at (n = {}, a = {}, z = {}); family dimension may differ from n",
            spec.n, spec.a, spec.z
        )));
    }
    let mut gap = f64::INFINITY;
    for i in 1..eigs.len() {
        gap = gap.min(eigs[i].re - eigs[i - 1].re);
    }
    if gap < 1e-8 {
        return Ok(Some(format!(
            "nearly degenerate spectrum (gap {gap:.3e}) at (n = {}, a = {}, z = {}); family dimension may differ from n",
            spec.n, spec.a, spec.z
        )));
    }
    Ok(None)
}

/// Canonical special member Θ₀: unit diagonal, all remaining freedom
/// removed by least-norm coefficient selection in the trace-orthonormal
/// family basis.
pub fn theta_zero(spec: &HamiltonianSpec) -> Result<CMatrix> {
    let family = dieudonne_basis(spec, 1e-10)?;
    theta_zero_of_family(&family)
}

pub fn theta_zero_of_family(family: &PseudometricFamily) -> Result<CMatrix> {
    let n = family.spec.n;
    let dim = family.dim();
    if dim == 0 {
        return Err(Error::ConstructionFailure(
            "empty pseudometric family: no unit-diagonal member exists".into(),
        ));
    }
    let mut a = RMatrix::zeros(n, dim);
    for (q, b) in family.basis.iter().enumerate() {
        for j in 0..n {
            a[(j, q)] = b[(j, j)].re;
        }
    }
    let ones = vec![1.0; n];
    let c = pinv_solve(&a, &ones, 1e-12);
    let achieved = a.matvec(&c);
    let resid: f64 = achieved
        .iter()
        .zip(&ones)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    if resid > 1e-8 {
        return Err(Error::ConstructionFailure(format!(
            "unit-diagonal constraint unsatisfiable within the family (residual {resid:.3e})"
        )));
    }
    let mut theta = CMatrix::zeros(n, n);
    for (ci, bi) in c.iter().zip(&family.basis) {
        theta = theta.add(&bi.scale(C64::new(*ci, 0.0)));
    }
    Ok(theta)
}

// ---------------------------------------------------------------------
// closed forms
// ---------------------------------------------------------------------

/// n = 2 family: [[k, km − ika], [km + ika, k]], eigenvalues
/// k(1 ± √(m² + a²)).
pub fn pseudometric_n2(k: f64, m: f64, a: f64) -> CMatrix {
    let mut t = CMatrix::zeros(2, 2);
    t[(0, 0)] = C64::new(k, 0.0);
    t[(1, 1)] = C64::new(k, 0.0);
    t[(0, 1)] = C64::new(k * m, -k * a);
    t[(1, 0)] = C64::new(k * m, k * a);
    t
}

/// n = 4 family for H(4)(a, z), with w = 3^z·a. Hermitian and symmetric
/// about the second diagonal.
pub fn pseudometric_n4(p: &N4PseudometricParams, a: f64, z: f64) -> CMatrix {
    let (k, m, r, h) = (p.k, p.m, p.r, p.h);
    let w = 3.0_f64.powf(z) * a;
    let big_w = C64::new(-w * w * k + r - k - k * w * a, w * m + m * a);
    let big_z = C64::new(
        m * a * a - w * w * m - m + h,
        -(k * w - k * a - k * w * a * a - r * w + w * w * w * k),
    );
    let kw = C64::new(m, k * w); // m + i·k·w appears on both sub-diagonals
    let hq = C64::new(h, k * w + r * a);
    let rows = [
        [C64::new(k, 0.0), kw.conj(), big_w.conj(), big_z.conj()],
        [kw, C64::new(r, 0.0), hq.conj(), big_w.conj()],
        [big_w, hq, C64::new(r, 0.0), kw.conj()],
        [big_z, big_w, kw, C64::new(k, 0.0)],
    ];
    let mut t = CMatrix::zeros(4, 4);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            t[(i, j)] = *v;
        }
    }
    t
}

/// Eigenvalues of `pseudometric_n4` at (k, m, r, h) = (1, 0, 1, 0): the
/// four values 1 ± s/2 ± √Δ±/2 with s = w − a²w + w³.
pub fn theta_n4_closed_eigs(a: f64, z: f64) -> [f64; 4] {
    let w = 3.0_f64.powf(z) * a;
    let s = w - a * a * w + w * w * w;
    let mut out = [0.0; 4];
    let mut idx = 0;
    for outer in [1.0, -1.0] {
        let disc = w.powi(6)
            + (2.0 - 2.0 * a * a) * w.powi(4)
            + (outer * 8.0 + 4.0 * a) * w.powi(3)
            + (5.0 + outer * 8.0 * a + 6.0 * a * a + a.powi(4)) * w * w
            + (4.0 * a + 4.0 * a.powi(3)) * w
            + 4.0 * a * a;
        for inner in [1.0, -1.0] {
            out[idx] = 1.0 + outer * 0.5 * s + inner * 0.5 * disc.sqrt();
            idx += 1;
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out
}

/// n = 6 family for H(6)(a, 0): unit diagonal, three free parameters.
pub fn pseudometric_n6(m: f64, d: f64, r: f64, a: f64) -> CMatrix {
    let mut t = CMatrix::identity(6);
    let mut set = |i: usize, j: usize, v: C64| {
        t[(i - 1, j - 1)] = v;
        t[(j - 1, i - 1)] = v.conj();
    };
    let a2 = a * a;
    let a3 = a2 * a;
    set(2, 1, C64::new(m, a));
    set(6, 5, C64::new(m, a));
    set(3, 2, C64::new(4.0 * m * a2 + m + d, 2.0 * a));
    set(5, 4, C64::new(4.0 * m * a2 + m + d, 2.0 * a));
    set(4, 3, C64::new(d + 4.0 * m * a2 + m + r, 3.0 * a));
    set(3, 1, C64::new(-2.0 * a2, 2.0 * m * a));
    set(6, 4, C64::new(-2.0 * a2, 2.0 * m * a));
    set(4, 2, C64::new(-6.0 * a2, 8.0 * m * a3 + 4.0 * m * a + 2.0 * d * a));
    set(5, 3, C64::new(-6.0 * a2, 8.0 * m * a3 + 4.0 * m * a + 2.0 * d * a));
    set(4, 1, C64::new(d, a - 4.0 * a3));
    set(6, 3, C64::new(d, a - 4.0 * a3));
    set(5, 2, C64::new(r + d, 2.0 * a - 4.0 * a3));
    set(5, 1, C64::new(-4.0 * a2, 2.0 * m * a + 8.0 * m * a3 + 2.0 * d * a));
    set(6, 2, C64::new(-4.0 * a2, 2.0 * m * a + 8.0 * m * a3 + 2.0 * d * a));
    set(6, 1, C64::new(r, a));
    t
}

// ---------------------------------------------------------------------
// positivity
// ---------------------------------------------------------------------

const BETA_SEED: f64 = 1e-3;
const BETA_CAP: f64 = 1e3;

/// Positivity boundary of a pseudometric family member: the largest β
/// such that builder(a) is positive definite for 0 ≤ a < β, located by
/// bisection on the minimum eigenvalue to absolute tolerance `tol`.
pub fn positivity_beta<F>(builder: F, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<CMatrix>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("positivity tol must be positive, got {tol}")));
    }
    let min_eig = |a: f64| -> Result<f64> {
        let t = builder(a)?;
        let evs = eigvalsh(&t)?;
        Ok(evs.into_iter().fold(f64::INFINITY, f64::min))
    };
    if min_eig(0.0)? <= 0.0 {
        return Err(Error::ContractViolation(
            "builder must be positive definite at a = 0".into(),
        ));
    }
    let mut lo = 0.0;
    let mut hi = BETA_SEED;
    while min_eig(hi)? > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > BETA_CAP {
            return Err(Error::BracketError {
                lo: 0.0,
                hi: BETA_CAP,
                detail: "matrix stays positive definite over the whole scan range".into(),
            });
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if min_eig(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// ---------------------------------------------------------------------
// linearization
// ---------------------------------------------------------------------

/// First-order coefficient T in Θ₀(a) = I + a·T + O(a²) at z = 0.
///
/// Writing T = iM with M real antisymmetric, the intertwining relation to
/// first order reads [H(0), M] = 2·diag(−1,…,−1,+1,…,+1), solved exactly
/// in the eigenbasis of H(0). All entries of M come out integral.
pub fn linearized_metric(n: usize) -> Result<CMatrix> {
    let h0 = build_hamiltonian(&HamiltonianSpec::new(n, 0.0, 0.0)?)?;
    let spectrum = eig_hermitian(&h0)?;
    let v = spectrum.eigenvectors.as_ref().expect("vectors requested");
    let lam: Vec<f64> = spectrum.eigenvalues.iter().map(|e| e.re).collect();
    let weights = diagonal_weights(n, 0.0)?;
    let mut d = CMatrix::zeros(n, n);
    for j in 0..n {
        d[(j, j)] = C64::new(weights[j], 0.0);
    }
    let dt = v.adjoint().matmul(&d).matmul(v);
    let mut at = CMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            if j == k {
                if dt[(j, j)].norm() > 1e-10 {
                    return Err(Error::ConstructionFailure(format!(
                        "diagonal obstruction {:.3e} in the first-order solve",
                        dt[(j, j)].norm()
                    )));
                }
            } else {
                at[(j, k)] = dt[(j, k)].scale(2.0 / (lam[j] - lam[k]));
            }
        }
    }
    let m = v.matmul(&at).matmul(&v.adjoint());
    // T = i·M; M is real antisymmetric, so T is Hermitian with zero
    // diagonal and purely imaginary entries
    Ok(m.scale(C64::new(0.0, 1.0)))
}

/// Characteristic polynomial of the linearization coefficient T, in the
/// slope variable h: its roots are the first-order eigenvalue slopes
/// θ_j(a) ≈ 1 + h_j·a. Coefficients are exactly integral and recovered by
/// rounding; drift beyond 1e−6 is an error.
pub fn secular_polynomial(n: usize) -> Result<SecularPolynomial> {
    let t = linearized_metric(n)?;
    let slopes = eigvalsh(&t)?;
    // expand Π (h − h_j)
    let mut coeffs = vec![1.0f64];
    for r in &slopes {
        let mut next = vec![0.0; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c * r;
        }
        coeffs = next;
    }
    let mut rounded = Vec::with_capacity(coeffs.len());
    for &c in &coeffs {
        let r = c.round();
        if (c - r).abs() > 1e-6 {
            return Err(Error::Exactness(format!(
                "secular coefficient {c} is not within 1e-6 of an integer"
            )));
        }
        // normalize -0.0 so serialized artifacts print a plain zero
        rounded.push(if r == 0.0 { 0.0 } else { r });
    }
    SecularPolynomial::new(rounded, "h")
}

/// First-order positivity estimate: β ≈ 1/max|h_j| from the secular
/// slopes (the fastest-decreasing eigenvalue hits zero first).
pub fn beta_linear_estimate(n: usize) -> Result<f64> {
    let poly = secular_polynomial(n)?;
    let roots = poly_real_roots(&poly.coefficients)?;
    let hmax = roots.iter().fold(0.0f64, |acc, r| acc.max(r.abs()));
    if hmax == 0.0 {
        return Err(Error::ConstructionFailure(
            "secular polynomial has no nonzero real roots".into(),
        ));
    }
    Ok(1.0 / hmax)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h4(a: f64, z: f64) -> CMatrix {
        build_hamiltonian(&HamiltonianSpec { n: 4, a, z }).unwrap()
    }

    #[test]
    fn n2_family_matches_nullspace() {
        let spec = HamiltonianSpec { n: 2, a: 0.3, z: 3.0 };
        let fam = dieudonne_basis(&spec, 1e-10).unwrap();
        assert_eq!(fam.dim(), 2);
        assert!(fam.warning.is_none());
        // both pse2 generators project fully onto the family span
        for probe in [pseudometric_n2(1.0, 0.0, 0.3), pseudometric_n2(1.0, 1.0, 0.3)] {
            let mut residual = probe.clone();
            for b in &fam.basis {
                let coef = b.inner(&probe);
                residual = residual.sub(&b.scale(coef));
            }
            assert!(residual.norm_fro() < 1e-10 * probe.norm_fro());
        }
    }

    #[test]
    fn gene4_satisfies_intertwining() {
        let p = N4PseudometricParams { k: 0.7, m: -0.4, r: 1.3, h: 0.2 };
        for &(a, z) in &[(0.1, 0.0), (0.05, 2.0), (-0.3, 1.0)] {
            let t = pseudometric_n4(&p, a, z);
            assert!(t.hermiticity_defect() < 1e-13);
            let h = h4(a, z);
            assert!(
                intertwining_defect(&h, &t) <= 1e-12 * h.norm_fro() * t.norm_fro(),
                "a={a} z={z}"
            );
        }
    }

    #[test]
    fn gene4_eigenvalues_closed_form() {
        for &(a, z) in &[(0.05, 1.0), (0.02, 2.0), (0.1, 0.0)] {
            let t = pseudometric_n4(&N4PseudometricParams { k: 1.0, m: 0.0, r: 1.0, h: 0.0 }, a, z);
            let evs = eigvalsh(&t).unwrap();
            let expect = theta_n4_closed_eigs(a, z);
            for (x, y) in evs.iter().zip(expect) {
                assert!((x - y).abs() < 1e-10, "a={a} z={z}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn n6_list_satisfies_intertwining() {
        for &(m, d, r, a) in &[(0.0, 0.0, 0.0, 0.3), (0.4, -0.2, 0.7, 0.25), (-1.1, 0.5, 0.1, -0.35)] {
            let t = pseudometric_n6(m, d, r, a);
            assert!(t.hermiticity_defect() < 1e-13);
            let h = build_hamiltonian(&HamiltonianSpec { n: 6, a, z: 0.0 }).unwrap();
            assert!(intertwining_defect(&h, &t) <= 1e-12 * h.norm_fro() * t.norm_fro());
        }
    }

    #[test]
    fn family_dimension_equals_n() {
        for n in [2usize, 4, 6, 8] {
            let fam = dieudonne_basis(&HamiltonianSpec { n, a: 0.01, z: 3.0 }, 1e-10).unwrap();
            assert_eq!(fam.dim(), n, "n = {n}");
            assert!(fam.residuals.iter().all(|&r| r <= 1e-10));
        }
    }

    #[test]
    fn dimension_warning_past_alpha() {
        // n = 2 loses reality at a = 1; beyond it the family degenerates
        let fam = dieudonne_basis(&HamiltonianSpec { n: 2, a: 1.5, z: 3.0 }, 1e-10).unwrap();
        assert!(fam.warning.is_some());
    }

    #[test]
    fn theta_zero_matches_closed_forms() {
        // n = 4: canonical member is the (1,0,1,0) closed form
        for &(a, z) in &[(0.1, 0.0), (0.05, 1.0)] {
            let t0 = theta_zero(&HamiltonianSpec { n: 4, a, z }).unwrap();
            let ref4 = pseudometric_n4(&N4PseudometricParams { k: 1.0, m: 0.0, r: 1.0, h: 0.0 }, a, z);
            assert!(t0.sub(&ref4).norm_fro() < 1e-9, "a={a} z={z}: {}", t0.sub(&ref4).norm_fro());
        }
        // n = 6: canonical member is the (0,0,0) list matrix
        for a in [0.1, 0.25] {
            let t0 = theta_zero(&HamiltonianSpec { n: 6, a, z: 0.0 }).unwrap();
            let ref6 = pseudometric_n6(0.0, 0.0, 0.0, a);
            assert!(t0.sub(&ref6).norm_fro() < 1e-9, "a={a}: {}", t0.sub(&ref6).norm_fro());
        }
    }

    #[test]
    fn beta_two_site() {
        let beta = positivity_beta(|a| Ok(pseudometric_n2(1.0, 0.0, a)), 1e-10).unwrap();
        assert!((beta - 1.0).abs() < 1e-9);
    }

    #[test]
    fn beta_six_site() {
        let beta = positivity_beta(|a| Ok(pseudometric_n6(0.0, 0.0, 0.0, a)), 1e-10).unwrap();
        assert!((beta - 0.2718445).abs() < 1e-5, "{beta}");
    }

    #[test]
    fn bracket_failure_when_always_positive() {
        let e = positivity_beta(|_| Ok(CMatrix::identity(3)), 1e-8);
        assert!(matches!(e, Err(Error::BracketError { .. })));
    }

    #[test]
    fn linearized_six_site_entries() {
        let t = linearized_metric(6).unwrap();
        let m_ref: [[f64; 6]; 6] = [
            [0.0, -1.0, 0.0, -1.0, 0.0, -1.0],
            [1.0, 0.0, -2.0, 0.0, -2.0, 0.0],
            [0.0, 2.0, 0.0, -3.0, 0.0, -1.0],
            [1.0, 0.0, 3.0, 0.0, -2.0, 0.0],
            [0.0, 2.0, 0.0, 2.0, 0.0, -1.0],
            [1.0, 0.0, 1.0, 0.0, 1.0, 0.0],
        ];
        for i in 0..6 {
            for j in 0..6 {
                let want = C64::new(0.0, m_ref[i][j]);
                assert!((t[(i, j)] - want).norm() < 1e-10, "({i},{j})");
            }
        }
    }

    #[test]
    fn linearized_eight_site_spot_checks() {
        let t = linearized_metric(8).unwrap();
        assert!((t[(3, 4)] - C64::new(0.0, -4.0)).norm() < 1e-10);
        assert!((t[(4, 3)] - C64::new(0.0, 4.0)).norm() < 1e-10);
        assert!(t.hermiticity_defect() < 1e-12);
        for i in 0..8 {
            assert!(t[(i, i)].norm() < 1e-12);
            for j in 0..8 {
                assert!(t[(i, j)].re.abs() < 1e-12);
                let im = t[(i, j)].im;
                assert!((im - im.round()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn secular_polynomials() {
        let p2 = secular_polynomial(2).unwrap();
        assert_eq!(p2.coefficients, vec![1.0, 0.0, -1.0]);
        let p6 = secular_polynomial(6).unwrap();
        assert_eq!(p6.coefficients, vec![1.0, 0.0, -26.0, 0.0, 181.0, 0.0, -225.0]);
        let p8 = secular_polynomial(8).unwrap();
        assert_eq!(
            p8.coefficients,
            vec![1.0, 0.0, -70.0, 0.0, 1487.0, 0.0, -9139.0, 0.0, 11025.0]
        );
    }

    #[test]
    fn beta_estimates() {
        assert!((beta_linear_estimate(2).unwrap() - 1.0).abs() < 1e-12);
        assert!((beta_linear_estimate(6).unwrap() - 1.0 / 3.846027361).abs() < 1e-9);
        assert!((beta_linear_estimate(8).unwrap() - 1.0 / 5.762552919).abs() < 1e-9);
    }
}
