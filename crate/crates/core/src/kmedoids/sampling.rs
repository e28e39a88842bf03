//! CLARA (PAM on samples) and CLARANS (randomized swap search).

use super::{check_k, improves, pam, Caches, MedoidResult, SwapAlgorithm};
use crate::error::{invalid, Result};
use crate::matrix::{CondensedDistanceMatrix, Dissimilarity};
use crate::rng::RngState;

#[derive(Debug, Clone, PartialEq)]
pub struct ClaraConfig {
    pub numsamples: usize,
    /// `None` uses 40 + 2k, or 80 + 4k for the fast variant.
    pub samplesize: Option<usize>,
    /// FastCLARA: FastPAM on larger samples.
    pub fast: bool,
    /// Include the best medoids so far in every later sample.
    pub keep_best: bool,
    pub maxiter: usize,
}

impl Default for ClaraConfig {
    fn default() -> Self {
        ClaraConfig { numsamples: 5, samplesize: None, fast: false, keep_best: true, maxiter: 0 }
    }
}

impl ClaraConfig {
    pub fn samplesize_for(&self, k: usize) -> usize {
        self.samplesize.unwrap_or(if self.fast { 80 + 4 * k } else { 40 + 2 * k })
    }
}

fn sub_matrix<D: Dissimilarity + ?Sized>(m: &D, idx: &[usize]) -> Result<CondensedDistanceMatrix> {
    let mut entries = Vec::with_capacity(idx.len() * idx.len().saturating_sub(1) / 2);
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            entries.push(m.dist(i, j));
        }
    }
    CondensedDistanceMatrix::from_entries(idx.len(), entries)
}

/// Best of `numsamples` PAM runs on random samples, judged by TD on all points.
pub fn run_clara<D: Dissimilarity + ?Sized>(
    m: &D,
    k: usize,
    cfg: &ClaraConfig,
    rng: &mut RngState,
) -> Result<MedoidResult> {
    let n = m.len();
    check_k(n, k)?;
    let requested = cfg.samplesize_for(k);
    if requested < k {
        return Err(invalid(format!("CLARA sample size {requested} is smaller than k = {k}")));
    }
    if cfg.numsamples == 0 {
        return Err(invalid("CLARA needs at least one sample"));
    }
    let size = requested.min(n);
    let algo = if cfg.fast { SwapAlgorithm::FastPam { tolerance: 1.0 } } else { SwapAlgorithm::Pam };
    let mut best: Option<MedoidResult> = None;
    let mut count = 0u64;
    let mut evaluations = 0u64;
    for _ in 0..cfg.numsamples {
        let mut sample = match (&best, cfg.keep_best) {
            (Some(b), true) => {
                let rest: Vec<usize> = (0..n).filter(|i| !b.medoids.contains(i)).collect();
                let mut s = b.medoids.clone();
                if size > k {
                    s.extend(rng.sample_k(rest.len(), size - k)?.into_iter().map(|i| rest[i]));
                }
                s
            }
            _ => rng.sample_k(n, size)?,
        };
        sample.sort_unstable();
        let sub = sub_matrix(m, &sample)?;
        count += (size * (size - 1) / 2) as u64;
        let local = pam(&sub, k, algo, cfg.maxiter)?;
        count += local.distance_computations;
        evaluations += local.candidate_evaluations;
        let medoids: Vec<usize> = local.medoids.iter().map(|&i| sample[i]).collect();
        let caches = Caches::compute(m, &medoids, &mut count);
        let td = caches.td();
        if best.as_ref().is_none_or(|b| td < b.td) {
            best = Some(MedoidResult {
                medoids,
                assignment: caches.near,
                td,
                swaps_performed: local.swaps_performed,
                iterations: local.iterations,
                distance_computations: 0,
                candidate_evaluations: 0,
            });
        }
    }
    let mut best = best.expect("at least one sample");
    best.distance_computations = count;
    best.candidate_evaluations = evaluations;
    Ok(best)
}

/// Stop a CLARANS restart after this many consecutive non-improving samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxNeighbor {
    Count(usize),
    /// Fraction of the k·(n−k) swap neighbourhood, at least 250.
    Fraction(f64),
}

impl MaxNeighbor {
    pub fn resolve(self, n: usize, k: usize) -> usize {
        match self {
            MaxNeighbor::Count(c) => c,
            MaxNeighbor::Fraction(f) => 250.max((f * (k * (n - k)) as f64).ceil() as usize),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaransConfig {
    pub numlocal: usize,
    pub maxneighbor: MaxNeighbor,
    /// FastCLARANS: sample a non-medoid and try it against every medoid.
    pub fast: bool,
}

impl Default for ClaransConfig {
    fn default() -> Self {
        ClaransConfig { numlocal: 2, maxneighbor: MaxNeighbor::Fraction(0.0125), fast: false }
    }
}

/// Randomized local search over single swaps with `numlocal` restarts.
pub fn run_clarans<D: Dissimilarity + ?Sized>(
    m: &D,
    k: usize,
    cfg: &ClaransConfig,
    rng: &mut RngState,
) -> Result<MedoidResult> {
    let n = m.len();
    check_k(n, k)?;
    if cfg.numlocal == 0 {
        return Err(invalid("CLARANS needs numlocal ≥ 1"));
    }
    let maxneighbor = cfg.maxneighbor.resolve(n, k);
    let mut best: Option<MedoidResult> = None;
    let mut count = 0u64;
    let mut evaluations = 0u64;
    let mut deltas = vec![0.0; k];
    for _ in 0..cfg.numlocal {
        let mut medoids = rng.sample_k(n, k)?;
        let mut others: Vec<usize> = (0..n).filter(|i| !medoids.contains(i)).collect();
        let mut caches = Caches::compute(m, &medoids, &mut count);
        let mut swaps = 0;
        let mut failures = 0;
        while failures < maxneighbor && !others.is_empty() {
            let oi = rng.index_unchecked(others.len());
            let c = others[oi];
            let (d, h) = if cfg.fast {
                caches.deltas(m, c, &mut deltas, &mut count);
                let h = (0..k).fold(0, |b, h| if deltas[h] < deltas[b] { h } else { b });
                (deltas[h], h)
            } else {
                let h = rng.index_unchecked(k);
                (caches.delta(m, h, c, &mut count), h)
            };
            evaluations += 1;
            if improves(d, caches.td()) {
                others[oi] = medoids[h];
                medoids[h] = c;
                caches = Caches::compute(m, &medoids, &mut count);
                swaps += 1;
                failures = 0;
            } else {
                failures += 1;
            }
        }
        let td = caches.td();
        if best.as_ref().is_none_or(|b| td < b.td) {
            best = Some(MedoidResult {
                medoids,
                assignment: caches.near,
                td,
                swaps_performed: swaps,
                iterations: 0,
                distance_computations: 0,
                candidate_evaluations: 0,
            });
        }
    }
    let mut best = best.expect("numlocal ≥ 1");
    best.iterations = cfg.numlocal;
    best.distance_computations = count;
    best.candidate_evaluations = evaluations;
    Ok(best)
}
