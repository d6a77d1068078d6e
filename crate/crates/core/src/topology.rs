//! Topology of the real spectral locus.
//!
//! For fixed (n, z) the set {(a, ε) : ε is a real eigenvalue of H(n, a, z)}
//! decomposes into closed curves — deformed circles, one per merging level
//! pair. Their arrangement (who encircles whom, who sits above whom) is a
//! discrete topological invariant that changes only at critical exponents
//! z_c. This module extracts the curves by branch continuation in a,
//! classifies the arrangement as a [`LocusPattern`], enumerates every
//! pattern the nesting grammar admits (a Fibonacci count), and locates the
//! critical exponents by bisection on the pattern itself.

use crate::cmatrix::C64;
use crate::error::{Error, Result};
use crate::linalg::is_real_eig;
use crate::spectra::{count_real, eigenvalues_at};
use rayon::prelude::*;
use std::collections::HashMap;

/// Arrangement of the closed curves of a real spectral locus.
///
/// Canonical form: `VStack` children are never themselves `VStack`s and
/// there are always at least two of them, so each pattern has exactly one
/// representation and [`LocusPattern::serialize`] is injective.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LocusPattern {
    Circle,
    Encircle(Box<LocusPattern>),
    VStack(Vec<LocusPattern>),
}

impl LocusPattern {
    /// Stack patterns vertically, flattening nested stacks into the
    /// canonical form. Panics if fewer than two members result.
    pub fn vstack(children: Vec<LocusPattern>) -> LocusPattern {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c {
                LocusPattern::VStack(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        assert!(flat.len() >= 2, "a vertical stack needs at least two members");
        LocusPattern::VStack(flat)
    }

    pub fn encircle(inner: LocusPattern) -> LocusPattern {
        LocusPattern::Encircle(Box::new(inner))
    }

    /// Number of circles in the pattern; equals n/2 for classify output.
    pub fn leaf_count(&self) -> usize {
        match self {
            LocusPattern::Circle => 1,
            LocusPattern::Encircle(inner) => 1 + inner.leaf_count(),
            LocusPattern::VStack(children) => children.iter().map(|c| c.leaf_count()).sum(),
        }
    }

    /// Unique textual form: `C`, `E(...)`, `V(...,...)`.
    pub fn serialize(&self) -> String {
        match self {
            LocusPattern::Circle => "C".to_string(),
            LocusPattern::Encircle(inner) => format!("E({})", inner.serialize()),
            LocusPattern::VStack(children) => {
                let parts: Vec<String> = children.iter().map(|c| c.serialize()).collect();
                format!("V({})", parts.join(","))
            }
        }
    }
}

impl std::fmt::Display for LocusPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// One closed curve of the locus.
#[derive(Clone, Copy, Debug)]
pub struct LocusComponent {
    /// Indices (ascending at small a) of the level pair forming the curve.
    pub level_pair: (usize, usize),
    /// Vertical extent: at a = 0 for central components, at the island
    /// midpoint for anomalous ones.
    pub eps_lo: f64,
    pub eps_hi: f64,
    /// Coupling range on the a ≥ 0 side (mirrored to −a by symmetry):
    /// central components start at 0, islands at their re-entry point.
    pub a_lo: f64,
    pub a_merge: f64,
    /// Energy at which the pair coalesces at `a_merge`.
    pub merge_energy: f64,
    /// True for curves living on a detached partial-reality island.
    pub anomalous: bool,
}

/// Critical exponents of (n): pattern boundaries in z, descending, and
/// the pattern holding on each of the boundaries.len()+1 intervals,
/// listed from the largest-z interval down.
#[derive(Clone, Debug)]
pub struct CriticalExponentReport {
    pub n: usize,
    pub boundaries: Vec<f64>,
    pub patterns: Vec<LocusPattern>,
}

// ---------------------------------------------------------------------
// branch continuation
// ---------------------------------------------------------------------

const TRACK_SEED: f64 = 1e-6;
const TRACK_RATIO: f64 = 1.03;
const TRACK_HARD_CAP: f64 = 1e3;
const MAX_REFINE_DEPTH: usize = 40;

#[derive(Clone, Copy, Debug)]
struct MergeEvent {
    a_star: f64,
    pair: (usize, usize),
    pristine: bool,
    /// mean energy of the pair at the last accepted point below the merge
    energy_hint: f64,
}

#[derive(Clone, Copy, Debug)]
struct Island {
    a_in: f64,
    a_out: f64,
    pair: (usize, usize),
    energy_hint: f64,
}

struct Tracker {
    n: usize,
    z: f64,
    a: f64,
    /// current position of each branch; index = level order at a = 0
    v: Vec<C64>,
    /// energies at a = 0
    e0: Vec<f64>,
    real_now: Vec<bool>,
    /// real continuously since a = 0
    pristine: Vec<bool>,
    events: Vec<MergeEvent>,
    islands: Vec<Island>,
    entry_a: HashMap<usize, f64>,
}

fn greedy_match(v: &[C64], w: &[C64]) -> Vec<usize> {
    let n = v.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            pairs.push(((v[i] - w[j]).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for (_, i, j) in pairs {
        if sigma[i] == usize::MAX && !used[j] {
            sigma[i] = j;
            used[j] = true;
        }
    }
    sigma
}

/// For each branch, its nearest other branch if the relation is mutual,
/// else usize::MAX. Mutually nearest pairs are allowed to approach each
/// other without tripping the ambiguity test: they are about to merge.
fn mutual_nearest_partner(v: &[C64]) -> Vec<usize> {
    let n = v.len();
    let nearest: Vec<usize> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&k| k != i)
                .min_by(|&a, &b| {
                    (v[i] - v[a]).norm().partial_cmp(&(v[i] - v[b]).norm()).unwrap()
                })
                .unwrap()
        })
        .collect();
    (0..n)
        .map(|i| if nearest[nearest[i]] == i { nearest[i] } else { usize::MAX })
        .collect()
}

impl Tracker {
    fn new(n: usize, z: f64) -> Result<Self> {
        let v = eigenvalues_at(n, 0.0, z)?;
        let e0: Vec<f64> = v.iter().map(|e| e.re).collect();
        Ok(Tracker {
            n,
            z,
            a: 0.0,
            v,
            e0,
            real_now: vec![true; n],
            pristine: vec![true; n],
            events: Vec::new(),
            islands: Vec::new(),
            entry_a: HashMap::new(),
        })
    }

    fn count_at(&self, a: f64) -> Result<usize> {
        count_real(self.n, a, self.z)
    }

    /// Bisect the real-count transition inside (a_lo, a_hi].
    fn locate(&self, mut a_lo: f64, mut a_hi: f64, c_hi: usize) -> Result<f64> {
        for _ in 0..80 {
            let mid = 0.5 * (a_lo + a_hi);
            if mid == a_lo || mid == a_hi {
                break;
            }
            if self.count_at(mid)? > c_hi {
                a_lo = mid;
            } else {
                a_hi = mid;
            }
            if a_hi - a_lo < 1e-12 * (1.0 + a_hi) {
                break;
            }
        }
        Ok(0.5 * (a_lo + a_hi))
    }

    /// Advance to `a_next`, refining the step whenever the nearest-
    /// neighbor assignment is ambiguous (a branch moves almost as far as
    /// the distance to a non-partner neighbor).
    fn try_step(&mut self, a_next: f64, depth: usize) -> Result<()> {
        if depth > MAX_REFINE_DEPTH {
            return Err(Error::ResolutionError {
                a: a_next,
                detail: "branch matching still ambiguous at the finest step".into(),
            });
        }
        let w = eigenvalues_at(self.n, a_next, self.z)?;
        let sigma = greedy_match(&self.v, &w);
        let partner = mutual_nearest_partner(&self.v);
        for i in 0..self.n {
            let d = (self.v[i] - w[sigma[i]]).norm();
            let gap = (0..self.n)
                .filter(|&k| k != i && k != partner[i])
                .map(|k| (self.v[i] - self.v[k]).norm())
                .fold(f64::INFINITY, f64::min);
            if gap.is_finite() && d >= 0.45 * gap {
                let mid = 0.5 * (self.a + a_next);
                if mid <= self.a || a_next - self.a < 1e-13 * (1.0 + a_next) {
                    break; // representable floor: accept as-is
                }
                self.try_step(mid, depth + 1)?;
                return self.try_step(a_next, depth + 1);
            }
        }
        // step accepted: update reality bookkeeping
        let new_real: Vec<bool> = (0..self.n).map(|i| is_real_eig(w[sigma[i]])).collect();
        let lost: Vec<usize> =
            (0..self.n).filter(|&i| self.real_now[i] && !new_real[i]).collect();
        let gained: Vec<usize> =
            (0..self.n).filter(|&i| !self.real_now[i] && new_real[i]).collect();
        if !lost.is_empty() || !gained.is_empty() {
            let c_lo = self.count_at(self.a)?;
            let c_hi = self.count_at(a_next)?;
            let a_star = if c_lo != c_hi {
                self.locate(self.a, a_next, c_hi)?
            } else {
                0.5 * (self.a + a_next)
            };
            let mut lostset = lost;
            while let Some(&i) = lostset.first() {
                let j = lostset
                    .iter()
                    .copied()
                    .filter(|&k| k != i)
                    .min_by(|&p, &q| {
                        (self.v[i] - self.v[p])
                            .norm()
                            .partial_cmp(&(self.v[i] - self.v[q]).norm())
                            .unwrap()
                    })
                    .ok_or_else(|| Error::ResolutionError {
                        a: a_star,
                        detail: format!("branch {i} complexified without a partner"),
                    })?;
                lostset.retain(|&k| k != i && k != j);
                let (i, j) = if i < j { (i, j) } else { (j, i) };
                let pristine = self.pristine[i] && self.pristine[j];
                let energy_hint = 0.5 * (self.v[i].re + self.v[j].re);
                self.events.push(MergeEvent { a_star, pair: (i, j), pristine, energy_hint });
                if !pristine {
                    let a_in = self.entry_a.get(&i).or_else(|| self.entry_a.get(&j)).copied();
                    self.entry_a.remove(&i);
                    self.entry_a.remove(&j);
                    if let Some(a_in) = a_in {
                        self.islands.push(Island { a_in, a_out: a_star, pair: (i, j), energy_hint });
                    }
                }
            }
            for i in gained {
                self.pristine[i] = false;
                self.entry_a.insert(i, a_star);
            }
        }
        self.real_now = new_real;
        self.v = sigma.iter().map(|&j| w[j]).collect();
        self.a = a_next;
        Ok(())
    }

    /// March a upward geometrically until every branch that was real at
    /// a = 0 has merged; the cap doubles as needed up to a hard limit.
    fn run(&mut self, a_cap: Option<f64>, ratio: f64) -> Result<()> {
        let mut cap = a_cap.unwrap_or(1.0);
        let mut a = TRACK_SEED;
        loop {
            while a <= cap {
                self.try_step(a, 0)?;
                a *= ratio;
            }
            let live = (0..self.n).any(|i| self.pristine[i] && self.real_now[i]);
            if !live {
                return Ok(());
            }
            cap *= 2.0;
            if cap > TRACK_HARD_CAP {
                return Err(Error::ResolutionError {
                    a: cap,
                    detail: format!(
                        "levels of (n = {}, z = {}) stay real beyond a = {TRACK_HARD_CAP}",
                        self.n, self.z
                    ),
                });
            }
        }
    }
}

/// Refine a merge energy: evaluate just below the merge point and average
/// the two eigenvalues closest to the continuation's last estimate.
fn refine_merge_energy(n: usize, z: f64, a_star: f64, hint: f64) -> Result<f64> {
    let vals = eigenvalues_at(n, a_star * (1.0 - 1e-6), z)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        (vals[i].re - hint)
            .abs()
            .partial_cmp(&(vals[j].re - hint).abs())
            .unwrap()
    });
    Ok(0.5 * (vals[order[0]].re + vals[order[1]].re))
}

/// Trace the real spectral locus for a ∈ [−a_cap, a_cap] (the a < 0 half
/// is the mirror image) and return its closed curves. `steps` controls
/// the geometric continuation grid from 1e−6 to a_cap; ambiguous steps
/// are refined automatically. The cap grows if central curves are still
/// open at `a_cap`.
pub fn extract_locus(n: usize, z: f64, a_cap: f64, steps: usize) -> Result<Vec<LocusComponent>> {
    crate::lattice::HamiltonianSpec::new(n, 0.0, z)?;
    if !(a_cap > 0.0) || steps < 2 {
        return Err(Error::InvalidInput(format!(
            "locus extraction needs a_cap > 0 and steps ≥ 2, got {a_cap}, {steps}"
        )));
    }
    let ratio = (a_cap / TRACK_SEED).powf(1.0 / steps as f64).max(1.0 + 1e-6);
    let mut t = Tracker::new(n, z)?;
    t.run(Some(a_cap), ratio)?;
    let mut out = Vec::new();
    for ev in &t.events {
        if !ev.pristine {
            continue;
        }
        let (i, j) = ev.pair;
        let (lo, hi) = (t.e0[i].min(t.e0[j]), t.e0[i].max(t.e0[j]));
        out.push(LocusComponent {
            level_pair: ev.pair,
            eps_lo: lo,
            eps_hi: hi,
            a_lo: 0.0,
            a_merge: ev.a_star,
            merge_energy: refine_merge_energy(n, z, ev.a_star, ev.energy_hint)?,
            anomalous: false,
        });
    }
    for is in &t.islands {
        let a_mid = 0.5 * (is.a_in + is.a_out);
        let vals = eigenvalues_at(n, a_mid, z)?;
        let mut reals: Vec<f64> =
            vals.iter().filter(|e| is_real_eig(**e)).map(|e| e.re).collect();
        reals.sort_by(|x, y| {
            (x - is.energy_hint).abs().partial_cmp(&(y - is.energy_hint).abs()).unwrap()
        });
        let (mut lo, mut hi) = (is.energy_hint, is.energy_hint);
        if reals.len() >= 2 {
            lo = reals[0].min(reals[1]);
            hi = reals[0].max(reals[1]);
        }
        out.push(LocusComponent {
            level_pair: is.pair,
            eps_lo: lo,
            eps_hi: hi,
            a_lo: is.a_in,
            a_merge: is.a_out,
            merge_energy: refine_merge_energy(n, z, is.a_out, is.energy_hint)?,
            anomalous: true,
        });
    }
    out.sort_by(|a, b| a.a_merge.partial_cmp(&b.a_merge).unwrap());
    Ok(out)
}

// ---------------------------------------------------------------------
// classification
// ---------------------------------------------------------------------

const NEST_MARGIN: f64 = 1e-9;

/// Classify the locus topology of (n, z) as a canonical pattern. The
/// nesting forest is built from the curves' ε-intervals at a = 0; islands
/// are excluded. Near a critical exponent the intervals touch or the
/// continuation sees partner swaps — both are reported as degenerate.
pub fn classify(n: usize, z: f64) -> Result<LocusPattern> {
    crate::lattice::HamiltonianSpec::new(n, 0.0, z)?;
    let mut t = Tracker::new(n, z)?;
    t.run(None, TRACK_RATIO)?;
    let mut iv: Vec<(f64, f64)> = Vec::new();
    for ev in &t.events {
        if ev.pristine {
            let (i, j) = ev.pair;
            iv.push((t.e0[i].min(t.e0[j]), t.e0[i].max(t.e0[j])));
        }
    }
    if iv.len() != n / 2 {
        return Err(Error::DegenerateTopology {
            z,
            detail: format!(
                "expected {} central curves, found {} (re-entrant partner swap)",
                n / 2,
                iv.len()
            ),
        });
    }
    pattern_from_intervals(&iv, z)
}

/// Assemble the laminar forest of ε-intervals and emit the canonical
/// pattern. Fails as degenerate when intervals cross or touch within the
/// nesting margin.
fn pattern_from_intervals(iv: &[(f64, f64)], z: f64) -> Result<LocusPattern> {
    let m = iv.len();
    // narrowest first so each interval's parent is the tightest enclosure
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&p, &q| {
        let (wp, wq) = (iv[p].1 - iv[p].0, iv[q].1 - iv[q].0);
        wp.partial_cmp(&wq).unwrap().then(p.cmp(&q))
    });
    let mut parent = vec![usize::MAX; m];
    for (qi, &q) in order.iter().enumerate() {
        for &r in &order[qi + 1..] {
            let inside = iv[r].0 < iv[q].0 && iv[q].1 < iv[r].1;
            if inside {
                let with_margin =
                    iv[r].0 < iv[q].0 - NEST_MARGIN && iv[q].1 < iv[r].1 - NEST_MARGIN;
                if !with_margin {
                    return Err(Error::DegenerateTopology {
                        z,
                        detail: "curve intervals touch within the nesting margin".into(),
                    });
                }
                parent[q] = r;
                break;
            }
        }
        for r in 0..m {
            if r == q {
                continue;
            }
            let (a0, a1) = iv[q];
            let (b0, b1) = iv[r];
            if (a0 < b0 && b0 < a1 && a1 < b1) || (b0 < a0 && a0 < b1 && b1 < a1) {
                return Err(Error::DegenerateTopology {
                    z,
                    detail: "curve intervals cross: branch matching inconsistent".into(),
                });
            }
        }
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut roots: Vec<usize> = Vec::new();
    for q in 0..m {
        if parent[q] == usize::MAX {
            roots.push(q);
        } else {
            children[parent[q]].push(q);
        }
    }
    fn build(q: usize, iv: &[(f64, f64)], children: &[Vec<usize>]) -> LocusPattern {
        let mut ch = children[q].clone();
        if ch.is_empty() {
            return LocusPattern::Circle;
        }
        ch.sort_by(|&a, &b| iv[a].0.partial_cmp(&iv[b].0).unwrap());
        let parts: Vec<LocusPattern> =
            ch.iter().map(|&c| build(c, iv, children)).collect();
        LocusPattern::encircle(combine(parts))
    }
    fn combine(mut parts: Vec<LocusPattern>) -> LocusPattern {
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            LocusPattern::vstack(parts)
        }
    }
    roots.sort_by(|&a, &b| iv[a].0.partial_cmp(&iv[b].0).unwrap());
    let parts: Vec<LocusPattern> = roots.iter().map(|&r| build(r, iv, &children)).collect();
    Ok(combine(parts))
}

// ---------------------------------------------------------------------
// enumeration
// ---------------------------------------------------------------------

/// All patterns the nesting grammar admits for k circles:
/// every arrangement is either one outer circle around a (k−1)-pattern,
/// or a top and bottom circle flanking a (k−2)-pattern in a vertical
/// stack. Counts follow the Fibonacci recurrence: 1, 2, 3, 5, 8, …
pub fn enumerate_patterns(k: usize) -> Result<Vec<LocusPattern>> {
    if k == 0 {
        return Err(Error::InvalidInput("pattern enumeration needs k ≥ 1".into()));
    }
    // table[j] = all patterns with j circles; table[0] = the empty slot
    let mut table: Vec<Vec<Option<LocusPattern>>> = vec![vec![None], vec![Some(LocusPattern::Circle)]];
    for kk in 2..=k {
        let mut out: Vec<Option<LocusPattern>> = Vec::new();
        for p in &table[kk - 1] {
            let inner = p.clone().expect("patterns with ≥1 circle are never empty");
            out.push(Some(LocusPattern::encircle(inner)));
        }
        for p in &table[kk - 2] {
            let mut members = vec![LocusPattern::Circle];
            if let Some(mid) = p.clone() {
                members.push(mid);
            }
            members.push(LocusPattern::Circle);
            out.push(Some(LocusPattern::vstack(members)));
        }
        table.push(out);
    }
    let list: Vec<LocusPattern> = table[k].iter().map(|p| p.clone().unwrap()).collect();
    let mut seen = std::collections::HashSet::new();
    for p in &list {
        if !seen.insert(p.serialize()) {
            return Err(Error::ContractViolation(format!(
                "pattern grammar produced a duplicate: {}",
                p.serialize()
            )));
        }
    }
    Ok(list)
}

// ---------------------------------------------------------------------
// critical exponents
// ---------------------------------------------------------------------

/// Classify with the degenerate-retry rule: if z itself sits in a
/// transition band, try z ± 10·tol (kept inside (lo, hi)) before giving up.
fn classify_with_retry(n: usize, z: f64, tol: f64, lo: f64, hi: f64) -> Result<LocusPattern> {
    match classify(n, z) {
        Err(Error::DegenerateTopology { .. }) => {
            for cand in [z + 10.0 * tol, z - 10.0 * tol] {
                if cand > lo && cand < hi {
                    if let Ok(p) = classify(n, cand) {
                        return Ok(p);
                    }
                }
            }
            classify(n, z)
        }
        other => other,
    }
}

const COARSE_DZ: f64 = 0.15;

/// Locate every pattern change of (n) inside [z_min, z_max]: boundaries
/// to within `tol`, descending, plus the pattern on each interval
/// (largest z first). Coarse scan at Δz ≈ 0.15, then bisection comparing
/// canonical serializations.
pub fn critical_exponents(
    n: usize,
    z_min: f64,
    z_max: f64,
    tol: f64,
) -> Result<CriticalExponentReport> {
    if !(z_min < z_max) || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "critical-exponent scan needs z_min < z_max and tol > 0, got [{z_min}, {z_max}], {tol}"
        )));
    }
    let cells = (((z_max - z_min) / COARSE_DZ).ceil() as usize).max(1);
    let zs: Vec<f64> = (0..=cells)
        .map(|i| z_min + (z_max - z_min) * i as f64 / cells as f64)
        .collect();
    let pats: Vec<LocusPattern> = zs
        .par_iter()
        .map(|&zv| classify_with_retry(n, zv, tol, z_min, z_max))
        .collect::<Result<_>>()?;
    let mut boundaries_asc: Vec<f64> = Vec::new();
    let mut patterns_asc: Vec<LocusPattern> = vec![pats[0].clone()];
    for i in 0..cells {
        if pats[i] == pats[i + 1] {
            continue;
        }
        let (mut lo, mut hi) = (zs[i], zs[i + 1]);
        let plo = pats[i].clone();
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            match classify_with_retry(n, mid, tol, lo, hi) {
                Ok(pm) => {
                    if pm == plo {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Err(Error::DegenerateTopology { .. }) => {
                    // transition band wider than the retry offset: creep the
                    // lower edge forward a quarter step and keep bisecting
                    lo += 0.25 * (hi - lo);
                }
                Err(e) => return Err(e),
            }
        }
        boundaries_asc.push(0.5 * (lo + hi));
        patterns_asc.push(pats[i + 1].clone());
    }
    patterns_asc.reverse();
    boundaries_asc.reverse();
    Ok(CriticalExponentReport { n, boundaries: boundaries_asc, patterns: patterns_asc })
}

// ---------------------------------------------------------------------
// anomalies
// ---------------------------------------------------------------------

/// Partial-reality islands: maximal a-intervals whose real-eigenvalue
/// count exceeds the running minimum established closer to a = 0 (the
/// central region loses levels monotonically; any recovery is an island).
pub fn detect_anomalies(
    spec_base: &crate::lattice::HamiltonianSpec,
    a_cap: f64,
) -> Result<Vec<crate::spectra::RealityInterval>> {
    let iv = crate::spectra::reality_intervals(spec_base, a_cap)?;
    let mut running_min = iv[0].real_count;
    let mut out = Vec::new();
    for seg in &iv[1..] {
        if seg.real_count > running_min {
            out.push(*seg);
        }
        running_min = running_min.min(seg.real_count);
    }
    Ok(out)
}
