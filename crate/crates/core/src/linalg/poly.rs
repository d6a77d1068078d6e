//! Real roots of real-coefficient polynomials: companion-matrix
//! eigenvalues seeded into a Newton polish on the real axis.

use super::eig::eig_general;
use crate::cmatrix::{C64, CMatrix};
use crate::error::Error;

/// Horner evaluation of p and p′ (coefficients degree-descending).
fn horner(coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Scale for the residual acceptance test: Σ_j |c_j|·|x|^j, the natural
/// magnitude of rounding noise when evaluating p at x.
fn eval_scale(coeffs: &[f64], x: f64) -> f64 {
    let mut s = 0.0;
    for &c in coeffs {
        s = s * x.abs() + c.abs();
    }
    s.max(f64::MIN_POSITIVE)
}

/// All real roots of a real polynomial, with multiplicity, ascending.
/// Complex roots are omitted. Accepted roots satisfy
/// |p(r)| ≤ 1e−12·(Σ_j |c_j|·|r|^j).
pub fn poly_real_roots(coefficients: &[f64]) -> Result<Vec<f64>, Error> {
    // strip leading zeros
    let first = coefficients
        .iter()
        .position(|&c| c != 0.0)
        .ok_or_else(|| Error::InvalidInput("zero polynomial has no defined root set".into()))?;
    let coeffs = &coefficients[first..];
    if coeffs.len() == 1 {
        return Ok(Vec::new()); // nonzero constant
    }
    // strip trailing zeros: roots at x = 0 with multiplicity
    let trailing = coeffs.iter().rev().take_while(|&&c| c == 0.0).count();
    let mut roots = vec![0.0; trailing];
    let coeffs = &coeffs[..coeffs.len() - trailing];
    if coeffs.len() <= 1 {
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        return Ok(roots);
    }
    let n = coeffs.len() - 1;
    // companion matrix of the monic polynomial
    let lead = coeffs[0];
    let mut comp = CMatrix::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..n {
        comp[(i, n - 1)] = C64::new(-coeffs[n - i] / lead, 0.0);
    }
    let spectrum = eig_general(&comp)?;
    for lam in spectrum.eigenvalues {
        if lam.im.abs() > 1e-6 * (1.0 + lam.norm()) {
            continue;
        }
        // Newton polish constrained to the real axis
        let mut x = lam.re;
        let mut best = x;
        let mut best_abs = horner(coeffs, x).0.abs();
        for _ in 0..50 {
            let (p, dp) = horner(coeffs, x);
            if p.abs() < best_abs {
                best_abs = p.abs();
                best = x;
            }
            if dp == 0.0 || !x.is_finite() {
                break;
            }
            let step = p / dp;
            x -= step;
            if step.abs() <= f64::EPSILON * (1.0 + x.abs()) {
                let (p2, _) = horner(coeffs, x);
                if p2.abs() < best_abs {
                    best_abs = p2.abs();
                    best = x;
                }
                break;
            }
        }
        if best_abs <= 1e-12 * eval_scale(coeffs, best) {
            roots.push(best);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(roots)
}
