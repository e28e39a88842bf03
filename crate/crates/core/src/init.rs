//! Starting centers for k-means and k-medoids.
//!
//! Index strategies pick existing points and work on any [`Dissimilarity`];
//! on a [`Dataset`] they use Euclidean distance. Vector strategies generate
//! new points and are only meaningful for k-means.

use rand_distr::{Distribution, Normal};

use crate::data::Dataset;
use crate::error::{invalid, Error, Result};
use crate::kmedoids::pam_build;
use crate::matrix::{DataDissimilarity, Dissimilarity};
use crate::metric::Metric;
use crate::rng::RngState;

#[derive(Debug, Clone, PartialEq)]
pub enum InitStrategy {
    FirstK,
    RandomlyChosen,
    UniformGenerated,
    /// Per-dimension normal with the data mean and population standard deviation.
    NormalGenerated,
    KMeansPlusPlus,
    /// k-means++ seeded by a pair drawn with probability ∝ d(x, y)².
    Ostrovsky,
    PamBuild,
    /// The k points with the smallest normalized distance sums.
    Park,
    /// BUILD steps on fresh subsamples of 10 + ⌈√n⌉ points.
    Lab,
    FarthestPoints,
    FarthestSum,
    Predefined(Vec<Vec<f64>>),
}

impl InitStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            InitStrategy::FirstK => "first_k",
            InitStrategy::RandomlyChosen => "randomly_chosen",
            InitStrategy::UniformGenerated => "uniform_generated",
            InitStrategy::NormalGenerated => "normal_generated",
            InitStrategy::KMeansPlusPlus => "kmeanspp",
            InitStrategy::Ostrovsky => "ostrovsky",
            InitStrategy::PamBuild => "pam_build",
            InitStrategy::Park => "park",
            InitStrategy::Lab => "lab",
            InitStrategy::FarthestPoints => "farthest_points",
            InitStrategy::FarthestSum => "farthest_sum",
            InitStrategy::Predefined(_) => "predefined",
        }
    }

    /// Parses every strategy except `predefined`, which needs explicit centers.
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "first_k" => InitStrategy::FirstK,
            "randomly_chosen" => InitStrategy::RandomlyChosen,
            "uniform_generated" => InitStrategy::UniformGenerated,
            "normal_generated" => InitStrategy::NormalGenerated,
            "kmeanspp" => InitStrategy::KMeansPlusPlus,
            "ostrovsky" => InitStrategy::Ostrovsky,
            "pam_build" => InitStrategy::PamBuild,
            "park" => InitStrategy::Park,
            "lab" => InitStrategy::Lab,
            "farthest_points" => InitStrategy::FarthestPoints,
            "farthest_sum" => InitStrategy::FarthestSum,
            "predefined" => return Err(invalid("predefined initialization needs explicit centers")),
            other => return Err(invalid(format!("unknown initialization '{other}'"))),
        })
    }

    pub fn produces_vectors(&self) -> bool {
        matches!(self, InitStrategy::UniformGenerated | InitStrategy::NormalGenerated | InitStrategy::Predefined(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCenters {
    Indices(Vec<usize>),
    Vectors(Vec<Vec<f64>>),
}

impl InitialCenters {
    pub fn into_vectors(self, data: &Dataset) -> Vec<Vec<f64>> {
        match self {
            InitialCenters::Indices(idx) => idx.into_iter().map(|i| data.row(i).to_vec()).collect(),
            InitialCenters::Vectors(v) => v,
        }
    }
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(invalid(format!("k = {k} must lie in [1, {n}]")));
    }
    Ok(())
}

/// Initial k-means centers for `data`.
pub fn initialize(s: &InitStrategy, data: &Dataset, k: usize, rng: &mut RngState) -> Result<InitialCenters> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    let dim = data.dim();
    match s {
        InitStrategy::Predefined(centers) => {
            if centers.len() != k {
                return Err(invalid(format!("expected {k} predefined centers, got {}", centers.len())));
            }
            if let Some(c) = centers.iter().find(|c| c.len() != dim) {
                return Err(Error::DimensionMismatch { expected: dim, got: c.len() });
            }
            Ok(InitialCenters::Vectors(centers.clone()))
        }
        InitStrategy::UniformGenerated => {
            let (lo, hi) = bounds(data)?;
            let centers = (0..k)
                .map(|_| (0..dim).map(|j| lo[j] + rng.next_f64() * (hi[j] - lo[j])).collect())
                .collect();
            Ok(InitialCenters::Vectors(centers))
        }
        InitStrategy::NormalGenerated => {
            if data.is_empty() {
                return Err(Error::NotEnoughData("no points to estimate moments from".into()));
            }
            let mean = data.mean();
            let n = data.len() as f64;
            let sd: Vec<f64> = (0..dim)
                .map(|j| (data.rows().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / n).sqrt())
                .collect();
            let normals: Vec<Normal<f64>> = mean
                .iter()
                .zip(&sd)
                .map(|(&m, &s)| Normal::new(m, s).map_err(|e| invalid(format!("normal distribution: {e}"))))
                .collect::<Result<_>>()?;
            let centers = (0..k).map(|_| normals.iter().map(|nd| nd.sample(rng)).collect()).collect();
            Ok(InitialCenters::Vectors(centers))
        }
        InitStrategy::Ostrovsky => {
            check_k(data.len(), k)?;
            let pair = ostrovsky_pair_euclidean(data, rng);
            let dis = DataDissimilarity { data, metric: Metric::Euclidean };
            Ok(InitialCenters::Indices(from_pair(&dis, pair, k, rng)))
        }
        _ => {
            let dis = DataDissimilarity { data, metric: Metric::Euclidean };
            initialize_medoids(s, &dis, k, rng).map(InitialCenters::Indices)
        }
    }
}

/// Initial medoids; vector-producing strategies are rejected.
pub fn initialize_medoids<D: Dissimilarity + ?Sized>(
    s: &InitStrategy,
    m: &D,
    k: usize,
    rng: &mut RngState,
) -> Result<Vec<usize>> {
    if s.produces_vectors() {
        return Err(invalid(format!("initialization '{}' produces vectors, not medoids", s.name())));
    }
    let n = m.len();
    check_k(n, k)?;
    Ok(match s {
        InitStrategy::FirstK => (0..k).collect(),
        InitStrategy::RandomlyChosen => rng.sample_k(n, k)?,
        InitStrategy::KMeansPlusPlus => {
            let first = rng.index_unchecked(n);
            d2_continue(m, vec![first], k, rng)
        }
        InitStrategy::Ostrovsky => {
            let pair = ostrovsky_pair(m, rng);
            from_pair(m, pair, k, rng)
        }
        InitStrategy::PamBuild => pam_build(m, k)?.medoids,
        InitStrategy::Park => park(m, k),
        InitStrategy::Lab => lab(m, k, rng),
        InitStrategy::FarthestPoints => {
            let first = rng.index_unchecked(n);
            farthest_points(m, first, k)
        }
        InitStrategy::FarthestSum => {
            let first = rng.index_unchecked(n);
            farthest_sum(m, first, k)
        }
        InitStrategy::UniformGenerated | InitStrategy::NormalGenerated | InitStrategy::Predefined(_) => {
            unreachable!("rejected above")
        }
    })
}

fn bounds(data: &Dataset) -> Result<(Vec<f64>, Vec<f64>)> {
    if data.is_empty() {
        return Err(Error::NotEnoughData("no points to take a value range from".into()));
    }
    let mut lo = data.row(0).to_vec();
    let mut hi = lo.clone();
    for r in data.rows() {
        for (j, &v) in r.iter().enumerate() {
            lo[j] = lo[j].min(v);
            hi[j] = hi[j].max(v);
        }
    }
    Ok((lo, hi))
}

/// Index drawn with probability ∝ `w`, or `None` when all weights are zero.
fn weighted_index(w: &[f64], rng: &mut RngState) -> Option<usize> {
    let total: f64 = w.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return None;
    }
    let r = rng.next_f64() * total;
    let mut acc = 0.0;
    let mut last = None;
    for (i, &wi) in w.iter().enumerate() {
        if wi > 0.0 {
            acc += wi;
            last = Some(i);
            if acc > r {
                return last;
            }
        }
    }
    last
}

/// Continues `chosen` to `k` centers by D² sampling.
pub(crate) fn d2_continue<D: Dissimilarity + ?Sized>(
    m: &D,
    mut chosen: Vec<usize>,
    k: usize,
    rng: &mut RngState,
) -> Vec<usize> {
    let n = m.len();
    let mut w: Vec<f64> = (0..n)
        .map(|i| chosen.iter().map(|&c| m.dist(i, c).powi(2)).fold(f64::INFINITY, f64::min))
        .collect();
    while chosen.len() < k {
        let pick = weighted_index(&w, rng).unwrap_or_else(|| {
            let free: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
            free[rng.index_unchecked(free.len())]
        });
        chosen.push(pick);
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = wi.min(m.dist(i, pick).powi(2));
        }
    }
    chosen
}

fn from_pair<D: Dissimilarity + ?Sized>(m: &D, (a, b): (usize, usize), k: usize, rng: &mut RngState) -> Vec<usize> {
    if k == 1 {
        return vec![a];
    }
    d2_continue(m, vec![a, b], k, rng)
}

/// Ordered pair `(x, y)`, `x ≠ y`, drawn with probability ∝ d(x, y)².
fn ostrovsky_pair<D: Dissimilarity + ?Sized>(m: &D, rng: &mut RngState) -> (usize, usize) {
    let n = m.len();
    let marginal: Vec<f64> = (0..n).map(|x| (0..n).map(|y| m.dist(x, y).powi(2)).sum()).collect();
    pair_from_marginal(m, &marginal, rng)
}

/// As [`ostrovsky_pair`] for Euclidean data, with the O(n) marginal
/// Σ_y ‖x − y‖² = n‖x − μ‖² + Σ_y ‖y − μ‖².
fn ostrovsky_pair_euclidean(data: &Dataset, rng: &mut RngState) -> (usize, usize) {
    let mu = data.mean();
    let q: Vec<f64> = data.rows().map(|r| crate::metric::squared_euclidean(r, &mu)).collect();
    let scatter: f64 = q.iter().sum();
    let n = data.len() as f64;
    let marginal: Vec<f64> = q.iter().map(|qi| n * qi + scatter).collect();
    let dis = DataDissimilarity { data, metric: Metric::Euclidean };
    pair_from_marginal(&dis, &marginal, rng)
}

fn pair_from_marginal<D: Dissimilarity + ?Sized>(m: &D, marginal: &[f64], rng: &mut RngState) -> (usize, usize) {
    let n = m.len();
    if n == 1 {
        return (0, 0);
    }
    let Some(x) = weighted_index(marginal, rng) else {
        let p = rng.sample_k(n, 2).expect("n ≥ 2");
        return (p[0], p[1]);
    };
    let w: Vec<f64> = (0..n).map(|y| m.dist(x, y).powi(2)).collect();
    let y = weighted_index(&w, rng).expect("x has positive marginal weight");
    (x, y)
}

fn park<D: Dissimilarity + ?Sized>(m: &D, k: usize) -> Vec<usize> {
    let n = m.len();
    let row_sums: Vec<f64> = (0..n).map(|i| (0..n).map(|l| m.dist(i, l)).sum()).collect();
    let v: Vec<f64> = (0..n)
        .map(|j| (0..n).filter(|&i| row_sums[i] > 0.0).map(|i| m.dist(i, j) / row_sums[i]).sum())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then(a.cmp(&b)));
    order.truncate(k);
    for (a, &i) in order.iter().enumerate() {
        if let Some(&j) = order[a + 1..].iter().find(|&&j| m.dist(i, j) == 0.0) {
            log::warn!("park initialization chose coincident points {i} and {j}");
        }
    }
    order
}

fn lab<D: Dissimilarity + ?Sized>(m: &D, k: usize, rng: &mut RngState) -> Vec<usize> {
    let n = m.len();
    let size = (10 + (n as f64).sqrt().ceil() as usize).min(n);
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    while chosen.len() < k {
        let sample = rng.sample_k(n, size).expect("1 ≤ size ≤ n");
        let mut candidates: Vec<usize> = sample.iter().copied().filter(|c| !chosen.contains(c)).collect();
        if candidates.is_empty() {
            candidates.push((0..n).find(|c| !chosen.contains(c)).expect("k ≤ n"));
        }
        candidates.sort_unstable();
        let nearest: Vec<f64> = sample
            .iter()
            .map(|&s| chosen.iter().map(|&c| m.dist(s, c)).fold(f64::INFINITY, f64::min))
            .collect();
        // cost after adding c; the first medoid minimizes the plain distance sum
        let cost = |c: usize| -> f64 { sample.iter().zip(&nearest).map(|(&s, &d)| m.dist(s, c).min(d)).sum() };
        let mut best = (candidates[0], cost(candidates[0]));
        for &c in &candidates[1..] {
            let v = cost(c);
            if v < best.1 {
                best = (c, v);
            }
        }
        chosen.push(best.0);
    }
    chosen
}

/// Greedy max-min selection starting from `first`; ties go to the lowest index.
pub fn farthest_points<D: Dissimilarity + ?Sized>(m: &D, first: usize, k: usize) -> Vec<usize> {
    let n = m.len();
    let mut chosen = vec![first];
    let mut mind: Vec<f64> = (0..n).map(|i| m.dist(i, first)).collect();
    while chosen.len() < k {
        let next = (0..n)
            .filter(|i| !chosen.contains(i))
            .fold(None, |b: Option<usize>, i| match b {
                Some(b) if mind[b] >= mind[i] => Some(b),
                _ => Some(i),
            })
            .expect("k ≤ n");
        chosen.push(next);
        for (i, d) in mind.iter_mut().enumerate() {
            *d = d.min(m.dist(i, next));
        }
    }
    chosen
}

/// Greedy max-sum selection starting from `first`; ties go to the lowest index.
pub fn farthest_sum<D: Dissimilarity + ?Sized>(m: &D, first: usize, k: usize) -> Vec<usize> {
    let n = m.len();
    let mut chosen = vec![first];
    let mut sum: Vec<f64> = (0..n).map(|i| m.dist(i, first)).collect();
    while chosen.len() < k {
        let next = (0..n)
            .filter(|i| !chosen.contains(i))
            .fold(None, |b: Option<usize>, i| match b {
                Some(b) if sum[b] >= sum[i] => Some(b),
                _ => Some(i),
            })
            .expect("k ≤ n");
        chosen.push(next);
        for (i, s) in sum.iter_mut().enumerate() {
            *s += m.dist(i, next);
        }
    }
    chosen
}
