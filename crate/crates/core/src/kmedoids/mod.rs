//! k-medoids over an arbitrary dissimilarity: PAM BUILD/SWAP and its faster
//! variants, the EM-style Park method, and the CLARA/CLARANS wrappers.
//!
//! `distance_computations` counts dissimilarity lookups. Medoid positions are
//! cluster indices; a swap replaces the medoid in place.

mod sampling;

pub use sampling::{run_clara, run_clarans, ClaraConfig, ClaransConfig, MaxNeighbor};

use crate::clustering::{Clustering, Prototypes, RunStats};
use crate::error::{invalid, Result};
use crate::matrix::Dissimilarity;

#[derive(Debug, Clone, PartialEq)]
pub struct MedoidResult {
    pub medoids: Vec<usize>,
    /// Position in `medoids` of each point's nearest medoid (ties → lowest position).
    pub assignment: Vec<usize>,
    pub td: f64,
    pub swaps_performed: usize,
    pub iterations: usize,
    pub distance_computations: u64,
    /// Swap candidates whose ΔTD was evaluated. PAM evaluates each
    /// (medoid, non-medoid) pair; FastPAM1 evaluates each non-medoid once for
    /// all medoids.
    pub candidate_evaluations: u64,
}

impl MedoidResult {
    pub fn to_clustering(&self) -> Clustering {
        let labels = self.assignment.iter().map(|&a| a as i32).collect();
        Clustering::from_parts_unchecked(labels, self.medoids.len())
            .with_prototypes(Prototypes::Medoids(self.medoids.clone()))
            .with_stats(RunStats { iterations: self.iterations, distance_computations: self.distance_computations })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SwapAlgorithm {
    Pam,
    Reynolds,
    FastPam1,
    /// Eager multi-swap; tolerance 1 accepts every improving swap.
    FastPam { tolerance: f64 },
}

impl SwapAlgorithm {
    pub fn name(&self) -> &'static str {
        match self {
            SwapAlgorithm::Pam => "pam",
            SwapAlgorithm::Reynolds => "reynolds",
            SwapAlgorithm::FastPam1 => "fastpam1",
            SwapAlgorithm::FastPam { .. } => "fastpam",
        }
    }

    pub fn parse(s: &str, tolerance: f64) -> Result<Self> {
        Ok(match s {
            "pam" => SwapAlgorithm::Pam,
            "reynolds" => SwapAlgorithm::Reynolds,
            "fastpam1" => SwapAlgorithm::FastPam1,
            "fastpam" => {
                if !(0.0..=1.0).contains(&tolerance) {
                    return Err(invalid(format!("fastpam tolerance must lie in [0, 1], got {tolerance}")));
                }
                SwapAlgorithm::FastPam { tolerance }
            }
            other => return Err(invalid(format!("unknown k-medoids algorithm '{other}'"))),
        })
    }
}

/// Nearest and second-nearest medoid of every point.
#[derive(Debug, Clone)]
pub(crate) struct Caches {
    pub near: Vec<usize>,
    pub dn: Vec<f64>,
    pub ds: Vec<f64>,
}

impl Caches {
    pub fn compute<D: Dissimilarity + ?Sized>(m: &D, medoids: &[usize], count: &mut u64) -> Self {
        let n = m.len();
        let mut c = Caches { near: vec![0; n], dn: vec![0.0; n], ds: vec![f64::INFINITY; n] };
        for o in 0..n {
            let (mut best, mut bd, mut sd) = (0, f64::INFINITY, f64::INFINITY);
            for (h, &med) in medoids.iter().enumerate() {
                let d = m.dist(o, med);
                if d < bd {
                    sd = bd;
                    best = h;
                    bd = d;
                } else if d < sd {
                    sd = d;
                }
            }
            c.near[o] = best;
            c.dn[o] = bd;
            c.ds[o] = sd;
        }
        *count += (n * medoids.len()) as u64;
        c
    }

    pub fn td(&self) -> f64 {
        self.dn.iter().sum()
    }

    /// ΔTD of replacing medoid position `h` by point `c`.
    pub fn delta<D: Dissimilarity + ?Sized>(&self, m: &D, h: usize, c: usize, count: &mut u64) -> f64 {
        let mut delta = 0.0;
        for o in 0..m.len() {
            let d = m.dist(o, c);
            if self.near[o] == h {
                delta += d.min(self.ds[o]) - self.dn[o];
            } else if d < self.dn[o] {
                delta += d - self.dn[o];
            }
        }
        *count += m.len() as u64;
        delta
    }

    /// ΔTD of replacing each medoid position by `c`, in one pass over the points.
    pub fn deltas<D: Dissimilarity + ?Sized>(&self, m: &D, c: usize, out: &mut [f64], count: &mut u64) {
        out.fill(0.0);
        let mut shared = 0.0;
        for o in 0..m.len() {
            let d = m.dist(o, c);
            let gain = (d - self.dn[o]).min(0.0);
            shared += gain;
            out[self.near[o]] += d.min(self.ds[o]) - self.dn[o] - gain;
        }
        out.iter_mut().for_each(|v| *v += shared);
        *count += m.len() as u64;
    }
}

/// Swaps with |ΔTD| below this fraction of TD are treated as no improvement,
/// so rounding noise cannot cycle through equivalent configurations.
const IMPROVEMENT_EPS: f64 = 1e-12;

fn improves(delta: f64, td: f64) -> bool {
    delta < -IMPROVEMENT_EPS * td.max(f64::MIN_POSITIVE)
}

/// ΔTD values this close (relative to TD) count as tied. PAM and FastPAM1
/// sum the same terms in different orders, so exact float comparison would
/// let rounding pick different swaps.
const TIE_EPS: f64 = 1e-12;

/// Best swap among `(ΔTD, position, candidate)` triples: the lowest
/// `(position, candidate)` among those tied with the minimum ΔTD.
fn select_swap(cands: &[(f64, usize, usize)], td: f64) -> Option<(f64, usize, usize)> {
    let min = cands.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let limit = min + TIE_EPS * td.max(f64::MIN_POSITIVE);
    cands.iter().filter(|c| c.0 <= limit).min_by_key(|c| (c.1, c.2)).copied()
}

/// Strictly smaller ΔTD, then lowest medoid position, then lowest candidate.
fn better_swap(d: f64, h: usize, c: usize, best: Option<(f64, usize, usize)>) -> bool {
    match best {
        None => true,
        Some((bd, bh, bc)) => d < bd || (d == bd && (h, c) < (bh, bc)),
    }
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(invalid(format!("k = {k} must lie in [1, {n}]")));
    }
    Ok(())
}

pub(crate) fn check_medoids(n: usize, medoids: &[usize]) -> Result<()> {
    check_k(n, medoids.len())?;
    let mut seen = vec![false; n];
    for &m in medoids {
        if m >= n {
            return Err(invalid(format!("medoid index {m} out of range for {n} points")));
        }
        if std::mem::replace(&mut seen[m], true) {
            return Err(invalid(format!("medoid {m} listed twice")));
        }
    }
    Ok(())
}

fn result<D: Dissimilarity + ?Sized>(m: &D, medoids: Vec<usize>, mut count: u64) -> MedoidResult {
    let caches = Caches::compute(m, &medoids, &mut count);
    MedoidResult {
        td: caches.td(),
        assignment: caches.near,
        medoids,
        swaps_performed: 0,
        iterations: 0,
        distance_computations: count,
        candidate_evaluations: 0,
    }
}

/// Assignment and TD for a fixed medoid set.
pub fn assign_medoids<D: Dissimilarity + ?Sized>(m: &D, medoids: &[usize]) -> Result<MedoidResult> {
    check_medoids(m.len(), medoids)?;
    Ok(result(m, medoids.to_vec(), 0))
}

/// Greedy BUILD: the 1-medoid first, then the point with the largest TD
/// reduction; ties go to the lowest index.
pub fn pam_build<D: Dissimilarity + ?Sized>(m: &D, k: usize) -> Result<MedoidResult> {
    let n = m.len();
    check_k(n, k)?;
    let mut count = 0u64;
    let mut first = (0, f64::INFINITY);
    for j in 0..n {
        let s: f64 = (0..n).map(|i| m.dist(i, j)).sum();
        if s < first.1 {
            first = (j, s);
        }
    }
    count += (n * n) as u64;
    let mut medoids = vec![first.0];
    let mut is_medoid = vec![false; n];
    is_medoid[first.0] = true;
    let mut dn: Vec<f64> = (0..n).map(|i| m.dist(i, first.0)).collect();
    while medoids.len() < k {
        let mut best = (usize::MAX, f64::NEG_INFINITY);
        for c in (0..n).filter(|&c| !is_medoid[c]) {
            let gain: f64 = (0..n).map(|i| (dn[i] - m.dist(i, c)).max(0.0)).sum();
            count += n as u64;
            if gain > best.1 {
                best = (c, gain);
            }
        }
        let c = best.0;
        medoids.push(c);
        is_medoid[c] = true;
        for (i, d) in dn.iter_mut().enumerate() {
            *d = d.min(m.dist(i, c));
        }
        count += n as u64;
    }
    Ok(result(m, medoids, count))
}

/// SWAP phase from `start`. `maxiter` 0 means no pass limit.
pub fn pam_swap<D: Dissimilarity + ?Sized>(
    m: &D,
    start: &MedoidResult,
    algo: SwapAlgorithm,
    maxiter: usize,
) -> Result<MedoidResult> {
    let n = m.len();
    check_medoids(n, &start.medoids)?;
    let k = start.medoids.len();
    let mut medoids = start.medoids.clone();
    let mut is_medoid = vec![false; n];
    medoids.iter().for_each(|&c| is_medoid[c] = true);
    let mut count = 0u64;
    let mut evaluations = 0u64;
    let mut swaps = 0;
    let mut passes = 0;
    let mut caches = Caches::compute(m, &medoids, &mut count);
    let mut deltas = vec![0.0; k];
    while maxiter == 0 || passes < maxiter {
        passes += 1;
        let td = caches.td();
        let mut best: Option<(f64, usize, usize)> = None;
        let mut cands: Vec<(f64, usize, usize)> = Vec::new();
        match algo {
            SwapAlgorithm::Pam => {
                for h in 0..k {
                    for c in (0..n).filter(|&c| !is_medoid[c]) {
                        cands.push((caches.delta(m, h, c, &mut count), h, c));
                    }
                }
                evaluations += (k * (n - k)) as u64;
            }
            SwapAlgorithm::Reynolds => {
                // removing medoid h costs the same for every candidate
                let mut removal = vec![0.0; k];
                for o in 0..n {
                    removal[caches.near[o]] += caches.ds[o] - caches.dn[o];
                }
                for (h, &removed) in removal.iter().enumerate() {
                    for c in (0..n).filter(|&c| !is_medoid[c]) {
                        let d = if k == 1 {
                            caches.delta(m, h, c, &mut count)
                        } else {
                            let mut d = removed;
                            for o in 0..n {
                                let doc = m.dist(o, c);
                                let base = if caches.near[o] == h { caches.ds[o] } else { caches.dn[o] };
                                d += (doc - base).min(0.0);
                            }
                            count += n as u64;
                            d
                        };
                        cands.push((d, h, c));
                    }
                }
                evaluations += (k * (n - k)) as u64;
            }
            SwapAlgorithm::FastPam1 => {
                for c in (0..n).filter(|&c| !is_medoid[c]) {
                    caches.deltas(m, c, &mut deltas, &mut count);
                    cands.extend(deltas.iter().enumerate().map(|(h, &d)| (d, h, c)));
                }
                evaluations += (n - k) as u64;
            }
            SwapAlgorithm::FastPam { tolerance } => {
                // best candidate per medoid position
                let mut per_medoid: Vec<Option<(f64, usize, usize)>> = vec![None; k];
                for c in (0..n).filter(|&c| !is_medoid[c]) {
                    caches.deltas(m, c, &mut deltas, &mut count);
                    for (h, &d) in deltas.iter().enumerate() {
                        if better_swap(d, h, c, per_medoid[h]) {
                            per_medoid[h] = Some((d, h, c));
                        }
                        if better_swap(d, h, c, best) {
                            best = Some((d, h, c));
                        }
                    }
                }
                evaluations += (n - k) as u64;
                let Some((bd, _, _)) = best.filter(|b| improves(b.0, td)) else { break };
                let mut queue: Vec<(f64, usize, usize)> = per_medoid.into_iter().flatten().collect();
                queue.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                let threshold = -(1.0 - tolerance) * bd.abs();
                for (i, (_, h, c)) in queue.into_iter().enumerate() {
                    if is_medoid[c] {
                        continue;
                    }
                    let d = if i == 0 { bd } else { caches.delta(m, h, c, &mut count) };
                    let td_now = caches.td();
                    if !improves(d, td_now) || d > threshold {
                        continue;
                    }
                    is_medoid[medoids[h]] = false;
                    is_medoid[c] = true;
                    medoids[h] = c;
                    swaps += 1;
                    caches = Caches::compute(m, &medoids, &mut count);
                    debug_assert!(caches.td() < td_now, "swap did not reduce TD");
                }
                continue;
            }
        }
        let Some((d, h, c)) = select_swap(&cands, td).filter(|b| improves(b.0, td)) else { break };
        is_medoid[medoids[h]] = false;
        is_medoid[c] = true;
        medoids[h] = c;
        swaps += 1;
        caches = Caches::compute(m, &medoids, &mut count);
        debug_assert!(caches.td() < td, "swap with ΔTD {d} did not reduce TD");
    }
    Ok(MedoidResult {
        td: caches.td(),
        assignment: caches.near,
        medoids,
        swaps_performed: swaps,
        iterations: passes,
        distance_computations: count,
        candidate_evaluations: evaluations,
    })
}

/// BUILD followed by SWAP.
pub fn pam<D: Dissimilarity + ?Sized>(m: &D, k: usize, algo: SwapAlgorithm, maxiter: usize) -> Result<MedoidResult> {
    let start = pam_build(m, k)?;
    let mut r = pam_swap(m, &start, algo, maxiter)?;
    r.distance_computations += start.distance_computations;
    Ok(r)
}

/// Park's EM-style k-medoids: alternately move each medoid to the best
/// point of its cluster and reassign. A medoid only moves on a strict improvement.
pub fn run_park<D: Dissimilarity + ?Sized>(m: &D, medoids: &[usize], maxiter: usize) -> Result<MedoidResult> {
    let n = m.len();
    check_medoids(n, medoids)?;
    let k = medoids.len();
    let mut medoids = medoids.to_vec();
    let mut count = 0u64;
    let mut caches = Caches::compute(m, &medoids, &mut count);
    let mut iterations = 0;
    let mut swaps = 0;
    while maxiter == 0 || iterations < maxiter {
        iterations += 1;
        let mut members = vec![Vec::new(); k];
        caches.near.iter().enumerate().for_each(|(o, &h)| members[h].push(o));
        let mut changed = false;
        for (h, group) in members.iter().enumerate() {
            let cost = |j: usize| group.iter().map(|&o| m.dist(o, j)).sum::<f64>();
            let mut best = (medoids[h], cost(medoids[h]));
            // duplicate points can pull another medoid into this group
            for &j in group.iter().filter(|&&j| !medoids.contains(&j)) {
                let c = cost(j);
                if c < best.1 {
                    best = (j, c);
                }
            }
            count += ((group.len() + 1) * group.len()) as u64;
            if best.0 != medoids[h] {
                medoids[h] = best.0;
                changed = true;
                swaps += 1;
            }
        }
        if !changed {
            break;
        }
        caches = Caches::compute(m, &medoids, &mut count);
    }
    Ok(MedoidResult {
        td: caches.td(),
        assignment: caches.near,
        medoids,
        swaps_performed: swaps,
        iterations,
        distance_computations: count,
        candidate_evaluations: 0,
    })
}
