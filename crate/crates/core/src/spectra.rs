//! Coupling sweeps, reality intervals, and exceptional-point location.
//!
//! The question everywhere in this module is: for which couplings `a`
//! does H(n, a, z) keep an entirely real spectrum? The boundary of the
//! connected all-real interval around a = 0 is the exceptional point
//! α(n, z), where a pair of levels merges and bifurcates into the complex
//! plane. Detached re-entry windows at larger a (partial reality) are
//! reported by [`reality_intervals`] but never extend α.

use crate::cmatrix::C64;
use crate::error::{Error, Result};
use crate::lattice::{build_hamiltonian, HamiltonianSpec};
use crate::linalg::{eig_general, is_real_eig};
use rayon::prelude::*;

/// One eigenvalue with its reality flag (|Im ε| ≤ 1e−9·(1 + |ε|)).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlaggedEigenvalue {
    pub value: C64,
    pub is_real: bool,
}

/// Eigenvalues along a grid of couplings; `branches[i]` belongs to
/// `a_grid[i]` and is sorted by (Re, Im) ascending.
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub spec_base: HamiltonianSpec,
    pub a_grid: Vec<f64>,
    pub branches: Vec<Vec<FlaggedEigenvalue>>,
}

/// Exceptional point terminating the central all-real interval.
#[derive(Clone, Copy, Debug)]
pub struct ExceptionalPoint {
    pub n: usize,
    pub z: f64,
    pub alpha: f64,
    /// Shared energy of the merging pair, read off just below alpha.
    pub degenerate_energy: f64,
    /// Positions (ascending order, 0-based) of the two levels that merge;
    /// when two pairs merge simultaneously, the lower-energy pair.
    pub merged_pair: (usize, usize),
}

/// Outcome of the α search: either an exceptional point, or a report that
/// the spectrum stayed entirely real up to the scan cap.
#[derive(Clone, Copy, Debug)]
pub enum AlphaOutcome {
    Point(ExceptionalPoint),
    UnboundedReality { n: usize, z: f64, scanned_up_to: f64 },
}

/// Maximal subinterval of a scan with a locally constant number of real
/// eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealityInterval {
    pub a_lo: f64,
    pub a_hi: f64,
    pub real_count: usize,
}

pub(crate) fn eigenvalues_at(n: usize, a: f64, z: f64) -> Result<Vec<C64>> {
    let spec = HamiltonianSpec { n, a, z };
    let h = build_hamiltonian(&spec)?;
    match eig_general(&h) {
        Ok(s) => Ok(s.eigenvalues),
        Err(Error::Convergence { context, partial_eigenvalues }) => Err(Error::Convergence {
            context: format!("{context} (at a = {a}, n = {n}, z = {z})"),
            partial_eigenvalues,
        }),
        Err(e) => Err(e),
    }
}

pub(crate) fn count_real(n: usize, a: f64, z: f64) -> Result<usize> {
    Ok(eigenvalues_at(n, a, z)?.iter().filter(|&&e| is_real_eig(e)).count())
}

/// Eigenvalues over a uniform coupling grid. Grid points are evaluated in
/// parallel but reported in grid order, so output is deterministic.
pub fn sweep(spec_base: &HamiltonianSpec, a_min: f64, a_max: f64, steps: usize) -> Result<SweepResult> {
    if steps < 2 {
        return Err(Error::InvalidInput(format!("sweep needs steps ≥ 2, got {steps}")));
    }
    if !(a_min < a_max) {
        return Err(Error::InvalidInput(format!(
            "sweep needs a_min < a_max, got [{a_min}, {a_max}]"
        )));
    }
    let (n, z) = (spec_base.n, spec_base.z);
    crate::lattice::HamiltonianSpec::new(n, 0.0, z)?;
    let a_grid: Vec<f64> = (0..steps)
        .map(|i| a_min + (a_max - a_min) * i as f64 / (steps - 1) as f64)
        .collect();
    let branches: Vec<Vec<FlaggedEigenvalue>> = a_grid
        .par_iter()
        .map(|&a| {
            eigenvalues_at(n, a, z).map(|vals| {
                vals.into_iter()
                    .map(|value| FlaggedEigenvalue { value, is_real: is_real_eig(value) })
                    .collect()
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult { spec_base: *spec_base, a_grid, branches })
}

const ALPHA_SEED: f64 = 1e-6;
const ALPHA_CAP: f64 = 1e6;

/// Locate the exceptional point α(n, z): the edge of the connected
/// all-real coupling interval containing a = 0, to absolute tolerance
/// `tol` (1e−10 is the conventional choice). Reports unbounded reality if
/// the spectrum is still entirely real at a = 1e6.
pub fn find_alpha(n: usize, z: f64, tol: f64) -> Result<AlphaOutcome> {
    crate::lattice::HamiltonianSpec::new(n, 0.0, z)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("find_alpha needs tol > 0, got {tol}")));
    }
    let all_real = |a: f64| -> Result<bool> { Ok(count_real(n, a, z)? == n) };
    // grow the bracket geometrically until reality first fails
    let mut hi = ALPHA_SEED;
    let mut lo = 0.0;
    loop {
        if !all_real(hi)? {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi > ALPHA_CAP {
            return Ok(AlphaOutcome::UnboundedReality { n, z, scanned_up_to: ALPHA_CAP });
        }
    }
    let mut a_lo = lo;
    let mut a_hi = hi;
    while a_hi - a_lo > tol {
        let mid = 0.5 * (a_lo + a_hi);
        if mid <= a_lo || mid >= a_hi {
            break;
        }
        if all_real(mid)? {
            a_lo = mid;
        } else {
            a_hi = mid;
        }
    }
    let alpha = 0.5 * (a_lo + a_hi);

    // identify the merging pair from the complex bifurcation just above α
    let above = eigenvalues_at(n, alpha * (1.0 + 1e-6), z)?;
    let mut complex_res: Vec<f64> = above
        .iter()
        .filter(|&&e| !is_real_eig(e) && e.im > 0.0)
        .map(|e| e.re)
        .collect();
    complex_res.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let target = *complex_res.first().ok_or_else(|| Error::ResolutionError {
        a: alpha,
        detail: "no complex pair visible just above the located alpha".into(),
    })?;

    // read the degenerate energy just below α, averaging the two levels
    // closest to the bifurcation energy
    let below = eigenvalues_at(n, alpha * (1.0 - 1e-6), z)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        (below[i].re - target)
            .abs()
            .partial_cmp(&(below[j].re - target).abs())
            .unwrap()
    });
    let (mut i, mut j) = (order[0], order[1]);
    if i > j {
        std::mem::swap(&mut i, &mut j);
    }
    let degenerate_energy = 0.5 * (below[i].re + below[j].re);
    Ok(AlphaOutcome::Point(ExceptionalPoint {
        n,
        z,
        alpha,
        degenerate_energy,
        merged_pair: (i, j),
    }))
}

/// Convenience accessor: α itself, erroring out on unbounded reality.
pub fn alpha_value(n: usize, z: f64, tol: f64) -> Result<f64> {
    match find_alpha(n, z, tol)? {
        AlphaOutcome::Point(p) => Ok(p.alpha),
        AlphaOutcome::UnboundedReality { scanned_up_to, .. } => Err(Error::OutsideReality(format!(
            "spectrum of (n = {n}, z = {z}) stays real up to a = {scanned_up_to}"
        ))),
    }
}

const REALITY_GRID: usize = 4000;
const REALITY_EDGE_TOL: f64 = 1e-8;

/// Partition [0, a_max_scan] into maximal intervals of constant
/// real-eigenvalue count. Edges are refined by bisection to 1e−8; windows
/// narrower than the internal scan grid (a_max_scan/4000) can be missed.
pub fn reality_intervals(spec_base: &HamiltonianSpec, a_max_scan: f64) -> Result<Vec<RealityInterval>> {
    if !(a_max_scan > 0.0) {
        return Err(Error::InvalidInput(format!(
            "reality scan needs a positive cap, got {a_max_scan}"
        )));
    }
    let (n, z) = (spec_base.n, spec_base.z);
    crate::lattice::HamiltonianSpec::new(n, 0.0, z)?;
    let grid: Vec<f64> = (0..=REALITY_GRID)
        .map(|i| a_max_scan * i as f64 / REALITY_GRID as f64)
        .collect();
    let counts: Vec<usize> = grid
        .par_iter()
        .map(|&a| count_real(n, a, z))
        .collect::<Result<_>>()?;
    let mut out: Vec<RealityInterval> = Vec::new();
    let mut seg_start = 0.0;
    let mut seg_count = counts[0];
    for w in 1..grid.len() {
        if counts[w] == seg_count {
            continue;
        }
        // count changes inside (grid[w−1], grid[w]): bisect the edge
        let left_count = seg_count;
        let mut lo = grid[w - 1];
        let mut hi = grid[w];
        while hi - lo > REALITY_EDGE_TOL {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if count_real(n, mid, z)? == left_count {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let edge = 0.5 * (lo + hi);
        out.push(RealityInterval { a_lo: seg_start, a_hi: edge, real_count: seg_count });
        seg_start = edge;
        seg_count = counts[w];
    }
    out.push(RealityInterval { a_lo: seg_start, a_hi: a_max_scan, real_count: seg_count });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, z: f64) -> HamiltonianSpec {
        HamiltonianSpec { n, a: 0.0, z }
    }

    #[test]
    fn two_site_circle() {
        let s = sweep(&spec(2, 3.0), -0.9, 0.9, 7).unwrap();
        for (idx, &a) in s.a_grid.iter().enumerate() {
            let r = (1.0f64 - a * a).sqrt();
            let e = &s.branches[idx];
            assert!(e[0].is_real && e[1].is_real);
            assert!((e[0].value.re - (2.0 - r)).abs() < 1e-12);
            assert!((e[1].value.re - (2.0 + r)).abs() < 1e-12);
        }
    }

    #[test]
    fn four_site_z0_closed_form() {
        let a = 0.3;
        let vals = eigenvalues_at(4, a, 0.0).unwrap();
        let mut expect: Vec<f64> = Vec::new();
        for s1 in [-1.0, 1.0] {
            for s2 in [-1.0, 1.0] {
                let inner = (5.0 - 16.0 * a * a).sqrt();
                expect.push(2.0 + s1 * 0.5 * (6.0 - 4.0 * a * a + s2 * 2.0 * inner).sqrt());
            }
        }
        expect.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (v, e) in vals.iter().zip(expect) {
            assert!(v.im.abs() < 1e-12 && (v.re - e).abs() < 1e-10);
        }
    }

    #[test]
    fn sweep_rejects_bad_grid() {
        assert!(sweep(&spec(2, 3.0), 0.0, 1.0, 1).is_err());
        assert!(sweep(&spec(2, 3.0), 1.0, 0.0, 10).is_err());
    }

    #[test]
    fn alpha_two_site() {
        match find_alpha(2, 3.0, 1e-10).unwrap() {
            AlphaOutcome::Point(p) => {
                assert!((p.alpha - 1.0).abs() < 1e-9);
                assert!((p.degenerate_energy - 2.0).abs() < 1e-3);
                assert_eq!(p.merged_pair, (0, 1));
            }
            _ => panic!("expected a bounded reality interval"),
        }
    }

    #[test]
    fn alpha_four_site_closed_form() {
        let expect = 0.5 - 69.0f64.sqrt() / 18.0;
        match find_alpha(4, 3.0, 1e-12).unwrap() {
            AlphaOutcome::Point(p) => {
                assert!((p.alpha - expect).abs() < 1e-10, "{} vs {}", p.alpha, expect);
                assert_eq!(p.merged_pair, (1, 2));
            }
            _ => panic!("expected a bounded reality interval"),
        }
    }

    #[test]
    fn reality_intervals_two_site() {
        let iv = reality_intervals(&spec(2, 3.0), 2.0).unwrap();
        assert_eq!(iv.len(), 2);
        assert_eq!(iv[0].real_count, 2);
        assert!((iv[0].a_hi - 1.0).abs() < 1e-7);
        assert_eq!(iv[1].real_count, 0);
        assert_eq!(iv[1].a_hi, 2.0);
    }

    #[test]
    fn left_right_symmetry() {
        // multiset equality: conjugate pairs share a real part, so sorted
        // positions can swap between the two runs
        for &(n, a, z) in &[(4, 0.02, 3.0), (6, 0.015, 2.0), (8, 0.4, 0.0)] {
            let va = eigenvalues_at(n, a, z).unwrap();
            let vb = eigenvalues_at(n, -a, z).unwrap();
            let mut used = vec![false; vb.len()];
            for x in &va {
                let best = (0..vb.len())
                    .filter(|&j| !used[j])
                    .min_by(|&i, &j| {
                        (x - vb[i]).norm().partial_cmp(&(x - vb[j]).norm()).unwrap()
                    })
                    .unwrap();
                used[best] = true;
                assert!((x - vb[best]).norm() < 1e-10, "n={n} a={a}: {x} vs {}", vb[best]);
            }
        }
    }

    #[test]
    fn up_down_symmetry_of_real_levels() {
        let vals = eigenvalues_at(6, 0.005, 3.0).unwrap();
        let mut reals: Vec<f64> =
            vals.iter().filter(|e| is_real_eig(**e)).map(|e| e.re).collect();
        assert_eq!(reals.len(), 6);
        reals.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for k in 0..reals.len() {
            let mirror = 4.0 - reals[reals.len() - 1 - k];
            assert!((reals[k] - mirror).abs() < 1e-10);
        }
    }
}
