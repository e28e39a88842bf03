//! Exact k-means.
//!
//! All variants except MacQueen and k-means-- are exact accelerations of
//! Lloyd: from the same starting centers they produce the same assignment
//! after every iteration (ties go to the lowest cluster index) and the same
//! means. They differ only in how many point-to-center distances they
//! evaluate. Center-to-center distances are not counted.
//!
//! Pruning bounds are kept on Euclidean distances; SSE is reported in squared
//! Euclidean units. Empty clusters keep their previous mean.

mod bounds;
mod macqueen;
mod minusminus;

use crate::clustering::{Clustering, Prototypes, RunStats};
use crate::data::Dataset;
use crate::error::{invalid, Error, Result};
use crate::init::InitStrategy;
use crate::metric::{euclidean, squared_euclidean};
use crate::par::{self, Execution};
use crate::rng::RngState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    Lloyd,
    MacQueen,
    /// Compare-means: prunes with pairwise center distances.
    Compare,
    /// Sort-means: as Compare with per-center sorted neighbour lists.
    Sort,
    Elkan,
    SimplifiedElkan,
    Hamerly,
    Annulus,
    Exponion,
    /// k-means--: the `rate·n` farthest points are outliers and do not move the means.
    MinusMinus { rate: f64 },
}

impl Variant {
    /// The variants that must reproduce Lloyd exactly.
    pub const EXACT: [Variant; 8] = [
        Variant::Lloyd,
        Variant::Compare,
        Variant::Sort,
        Variant::Elkan,
        Variant::SimplifiedElkan,
        Variant::Hamerly,
        Variant::Annulus,
        Variant::Exponion,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Lloyd => "lloyd",
            Variant::MacQueen => "macqueen",
            Variant::Compare => "compare",
            Variant::Sort => "sort",
            Variant::Elkan => "elkan",
            Variant::SimplifiedElkan => "simplified_elkan",
            Variant::Hamerly => "hamerly",
            Variant::Annulus => "annulus",
            Variant::Exponion => "exponion",
            Variant::MinusMinus { .. } => "minusminus",
        }
    }

    /// Parses a variant name; `rate` is used by `minusminus` only.
    pub fn parse(s: &str, rate: f64) -> Result<Self> {
        Ok(match s {
            "lloyd" => Variant::Lloyd,
            "macqueen" => Variant::MacQueen,
            "compare" => Variant::Compare,
            "sort" => Variant::Sort,
            "elkan" => Variant::Elkan,
            "simplified_elkan" => Variant::SimplifiedElkan,
            "hamerly" => Variant::Hamerly,
            "annulus" => Variant::Annulus,
            "exponion" => Variant::Exponion,
            "minusminus" => {
                if !(rate > 0.0 && rate < 1.0) {
                    return Err(invalid(format!("k-means-- rate must lie in (0, 1), got {rate}")));
                }
                Variant::MinusMinus { rate }
            }
            other => return Err(invalid(format!("unknown k-means variant '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansConfig {
    pub k: usize,
    pub variant: Variant,
    /// 0 runs to convergence.
    pub maxiter: usize,
    pub seed: u64,
    pub init: InitStrategy,
    pub execution: Execution,
}

impl KMeansConfig {
    pub fn new(k: usize, variant: Variant) -> Self {
        KMeansConfig {
            k,
            variant,
            maxiter: 0,
            seed: 0,
            init: InitStrategy::KMeansPlusPlus,
            execution: Execution::default(),
        }
    }

    pub fn maxiter(mut self, maxiter: usize) -> Self {
        self.maxiter = maxiter;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn init(mut self, init: InitStrategy) -> Self {
        self.init = init;
        self
    }

    pub fn execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub clustering: Clustering,
    pub means: Vec<Vec<f64>>,
    pub sse: f64,
    pub iterations: usize,
    pub distance_computations: u64,
    /// Point-to-center distance evaluations per iteration.
    pub per_iteration: Vec<u64>,
}

/// `k × d` centers, row-major.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Means {
    pub k: usize,
    pub dim: usize,
    pub values: Vec<f64>,
}

impl Means {
    fn from_rows(rows: &[Vec<f64>], dim: usize) -> Result<Self> {
        let mut values = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(invalid("initial centers must be finite"));
            }
            values.extend_from_slice(r);
        }
        Ok(Means { k: rows.len(), dim, values })
    }

    #[inline]
    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.dim..(j + 1) * self.dim]
    }

    fn to_rows(&self) -> Vec<Vec<f64>> {
        self.values.chunks_exact(self.dim).map(<[f64]>::to_vec).collect()
    }

    /// Symmetric `k × k` Euclidean center distances.
    pub fn pairwise(&self) -> Vec<f64> {
        let k = self.k;
        let mut cc = vec![0.0; k * k];
        for a in 0..k {
            for b in a + 1..k {
                let d = euclidean(self.row(a), self.row(b));
                cc[a * k + b] = d;
                cc[b * k + a] = d;
            }
        }
        cc
    }

    /// Means of the assigned points; `None` assignments and empty clusters
    /// leave the previous mean in place.
    pub fn recompute(&self, data: &Dataset, assign: impl Iterator<Item = Option<usize>>) -> Means {
        let mut sums = vec![0.0; self.values.len()];
        let mut counts = vec![0usize; self.k];
        for (i, a) in assign.enumerate() {
            if let Some(a) = a {
                counts[a] += 1;
                for (s, v) in sums[a * self.dim..(a + 1) * self.dim].iter_mut().zip(data.row(i)) {
                    *s += v;
                }
            }
        }
        let mut values = sums;
        for j in 0..self.k {
            let row = &mut values[j * self.dim..(j + 1) * self.dim];
            if counts[j] == 0 {
                row.copy_from_slice(self.row(j));
            } else {
                let c = counts[j] as f64;
                row.iter_mut().for_each(|v| *v /= c);
            }
        }
        Means { k: self.k, dim: self.dim, values }
    }

    /// Euclidean displacement of each center.
    pub fn movement(&self, newer: &Means) -> Vec<f64> {
        (0..self.k).map(|j| euclidean(self.row(j), newer.row(j))).collect()
    }
}

/// Nearest center under the lowest-index tie rule.
#[inline]
pub(crate) fn nearest(x: &[f64], means: &Means) -> (usize, f64) {
    let mut best = (0, euclidean(x, means.row(0)));
    for j in 1..means.k {
        let d = euclidean(x, means.row(j));
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// Assignment strategy for the shared iteration driver.
pub(crate) trait Pruner {
    /// Initial full assignment. Returns the number of distances evaluated.
    fn first(&mut self, data: &Dataset, means: &Means, assign: &mut [usize]) -> u64;
    /// Reassignment after the centers moved by `moved`. Returns whether any
    /// assignment changed and the number of distances evaluated.
    fn next(&mut self, data: &Dataset, means: &Means, moved: &[f64], assign: &mut [usize]) -> (bool, u64);
}

struct Lloyd {
    exec: Execution,
}

impl Pruner for Lloyd {
    fn first(&mut self, data: &Dataset, means: &Means, assign: &mut [usize]) -> u64 {
        self.next(data, means, &[], assign).1
    }

    fn next(&mut self, data: &Dataset, means: &Means, _moved: &[f64], assign: &mut [usize]) -> (bool, u64) {
        let fresh = par::map_indices(self.exec, data.len(), |i| nearest(data.row(i), means).0);
        let changed = fresh.iter().zip(assign.iter()).any(|(a, b)| a != b);
        assign.copy_from_slice(&fresh);
        (changed, (data.len() * means.k) as u64)
    }
}

pub(crate) fn validate_centers(data: &Dataset, k: usize, centers: &[Vec<f64>]) -> Result<Means> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    if k > data.len() {
        return Err(invalid(format!("k = {k} exceeds the number of points {}", data.len())));
    }
    if centers.len() != k {
        return Err(invalid(format!("expected {k} initial centers, got {}", centers.len())));
    }
    let means = Means::from_rows(centers, data.dim())?;
    for a in 0..k {
        for b in a + 1..k {
            if means.row(a) == means.row(b) {
                return Err(Error::DuplicateCenters(a, b));
            }
        }
    }
    Ok(means)
}

fn drive<P: Pruner>(data: &Dataset, mut means: Means, maxiter: usize, mut pruner: P) -> (Vec<usize>, Means, Vec<u64>) {
    let mut assign = vec![0usize; data.len()];
    let mut per_iteration = Vec::new();
    let mut moved = Vec::new();
    loop {
        let (changed, count) = if per_iteration.is_empty() {
            (true, pruner.first(data, &means, &mut assign))
        } else {
            pruner.next(data, &means, &moved, &mut assign)
        };
        per_iteration.push(count);
        if !changed {
            break;
        }
        let updated = means.recompute(data, assign.iter().map(|&a| Some(a)));
        moved = means.movement(&updated);
        means = updated;
        if maxiter > 0 && per_iteration.len() >= maxiter {
            break;
        }
    }
    (assign, means, per_iteration)
}

pub(crate) fn finish(data: &Dataset, assign: Vec<i32>, means: Means, per_iteration: Vec<u64>) -> KMeansResult {
    let sse = assign
        .iter()
        .enumerate()
        .filter(|(_, &a)| a >= 0)
        .map(|(i, &a)| squared_euclidean(data.row(i), means.row(a as usize)))
        .sum();
    let iterations = per_iteration.len();
    let distance_computations = per_iteration.iter().sum();
    let rows = means.to_rows();
    let clustering = Clustering::from_parts_unchecked(assign, means.k)
        .with_prototypes(Prototypes::Means(rows.clone()))
        .with_stats(RunStats { iterations, distance_computations });
    KMeansResult { clustering, means: rows, sse, iterations, distance_computations, per_iteration }
}

/// Runs k-means from explicit starting centers.
pub fn run_kmeans(data: &Dataset, cfg: &KMeansConfig, centers: &[Vec<f64>]) -> Result<KMeansResult> {
    let means = validate_centers(data, cfg.k, centers)?;
    let (assign, means, per_iteration) = match cfg.variant {
        Variant::MacQueen => return Ok(macqueen::run(data, means, cfg.maxiter)),
        Variant::MinusMinus { rate } => return minusminus::run(data, means, cfg.maxiter, rate, cfg.execution),
        Variant::Lloyd => drive(data, means, cfg.maxiter, Lloyd { exec: cfg.execution }),
        Variant::Compare => drive(data, means, cfg.maxiter, bounds::Compare),
        Variant::Sort => drive(data, means, cfg.maxiter, bounds::Sort),
        Variant::Elkan => drive(data, means, cfg.maxiter, bounds::Elkan::new(false)),
        Variant::SimplifiedElkan => drive(data, means, cfg.maxiter, bounds::Elkan::new(true)),
        Variant::Hamerly => drive(data, means, cfg.maxiter, bounds::Hamerly::new(bounds::Search::Full)),
        Variant::Annulus => drive(data, means, cfg.maxiter, bounds::Hamerly::new(bounds::Search::Annulus)),
        Variant::Exponion => drive(data, means, cfg.maxiter, bounds::Hamerly::new(bounds::Search::Exponion)),
    };
    // means were validated distinct and k ≤ n, so every label is in range;
    // labels need not all occur (an empty cluster keeps its stale mean)
    let assign = assign.into_iter().map(|a| a as i32).collect();
    Ok(finish(data, assign, means, per_iteration))
}

/// Lloyd-style k-means-- run (see [`Variant::MinusMinus`]).
pub fn run_kmeans_minusminus(data: &Dataset, cfg: &KMeansConfig, centers: &[Vec<f64>]) -> Result<KMeansResult> {
    match cfg.variant {
        Variant::MinusMinus { .. } => run_kmeans(data, cfg, centers),
        other => Err(invalid(format!("expected the minusminus variant, got {}", other.name()))),
    }
}

/// Initializes centers with `cfg.init` (seeded by `cfg.seed`) and runs k-means.
pub fn fit(data: &Dataset, cfg: &KMeansConfig) -> Result<KMeansResult> {
    let mut rng = RngState::from_seed(cfg.seed);
    fit_with_rng(data, cfg, &mut rng)
}

pub fn fit_with_rng(data: &Dataset, cfg: &KMeansConfig, rng: &mut RngState) -> Result<KMeansResult> {
    let centers = crate::init::initialize(&cfg.init, data, cfg.k, rng)?.into_vectors(data);
    run_kmeans(data, cfg, &centers)
}

#[cfg(test)]
mod tests;
