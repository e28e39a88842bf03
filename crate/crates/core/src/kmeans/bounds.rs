//! Triangle-inequality pruning for exact k-means.
//!
//! Every pruning test is strict so that a center at exactly the same
//! distance as the current one is still evaluated; combined with the
//! `d < best || (d == best && j < best_j)` update this reproduces Lloyd's
//! lowest-index tie rule.

use super::{Means, Pruner};
use crate::data::Dataset;
use crate::metric::{euclidean, norm};

/// Relative slack on annulus and exponion radii against rounding in norms.
const RADIUS_SLACK: f64 = 1e-10;

#[inline]
fn better(d: f64, j: usize, best_d: f64, best_j: usize) -> bool {
    d < best_d || (d == best_d && j < best_j)
}

/// Half the distance from each center to its nearest other center.
fn half_separation(cc: &[f64], k: usize) -> Vec<f64> {
    (0..k)
        .map(|a| {
            (0..k).filter(|&b| b != a).map(|b| cc[a * k + b]).fold(f64::INFINITY, f64::min) * 0.5
        })
        .collect()
}

/// Compare-means: skip `j` when `cc(best, j) > 2·d(x, best)`.
#[derive(Default)]
pub(crate) struct Compare;

impl Compare {
    fn assign(data: &Dataset, means: &Means, cc: &[f64], assign: &mut [usize]) -> (bool, u64) {
        let k = means.k;
        let mut changed = false;
        let mut count = 0;
        for (i, a) in assign.iter_mut().enumerate() {
            let x = data.row(i);
            let mut best = *a;
            let mut bd = euclidean(x, means.row(best));
            count += 1;
            for j in 0..k {
                if j == *a || cc[best * k + j] > 2.0 * bd {
                    continue;
                }
                let d = euclidean(x, means.row(j));
                count += 1;
                if better(d, j, bd, best) {
                    best = j;
                    bd = d;
                }
            }
            changed |= best != *a;
            *a = best;
        }
        (changed, count)
    }
}

impl Pruner for Compare {
    fn first(&mut self, data: &Dataset, means: &Means, assign: &mut [usize]) -> u64 {
        Self::assign(data, means, &means.pairwise(), assign).1
    }

    fn next(&mut self, data: &Dataset, means: &Means, _moved: &[f64], assign: &mut [usize]) -> (bool, u64) {
        Self::assign(data, means, &means.pairwise(), assign)
    }
}

/// Sort-means: scan the other centers in order of distance from the current
/// one and stop once `cc(a, j) > 2·d(x, a)`.
#[derive(Default)]
pub(crate) struct Sort;

impl Sort {
    fn assign(data: &Dataset, means: &Means, assign: &mut [usize]) -> (bool, u64) {
        let k = means.k;
        let cc = means.pairwise();
        let order: Vec<Vec<usize>> = (0..k)
            .map(|a| {
                let mut o: Vec<usize> = (0..k).filter(|&j| j != a).collect();
                o.sort_by(|&p, &q| cc[a * k + p].total_cmp(&cc[a * k + q]));
                o
            })
            .collect();
        let mut changed = false;
        let mut count = 0;
        for (i, a) in assign.iter_mut().enumerate() {
            let x = data.row(i);
            let da = euclidean(x, means.row(*a));
            count += 1;
            let (mut best, mut bd) = (*a, da);
            for &j in &order[*a] {
                if cc[*a * k + j] > 2.0 * da {
                    break;
                }
                let d = euclidean(x, means.row(j));
                count += 1;
                if better(d, j, bd, best) {
                    best = j;
                    bd = d;
                }
            }
            changed |= best != *a;
            *a = best;
        }
        (changed, count)
    }
}

impl Pruner for Sort {
    fn first(&mut self, data: &Dataset, means: &Means, assign: &mut [usize]) -> u64 {
        Self::assign(data, means, assign).1
    }

    fn next(&mut self, data: &Dataset, means: &Means, _moved: &[f64], assign: &mut [usize]) -> (bool, u64) {
        Self::assign(data, means, assign)
    }
}

/// Elkan: one upper bound and `k` lower bounds per point. The simplified
/// form drops the center-to-center tests.
pub(crate) struct Elkan {
    simplified: bool,
    upper: Vec<f64>,
    lower: Vec<f64>,
}

impl Elkan {
    pub fn new(simplified: bool) -> Self {
        Elkan { simplified, upper: Vec::new(), lower: Vec::new() }
    }
}

impl Pruner for Elkan {
    fn first(&mut self, data: &Dataset, means: &Means, assign: &mut [usize]) -> u64 {
        let (n, k) = (data.len(), means.k);
        self.upper = vec![0.0; n];
        self.lower = vec![0.0; n * k];
        for (i, (x, ai)) in data.rows().zip(assign.iter_mut()).enumerate() {
            let l = &mut self.lower[i * k..(i + 1) * k];
            for (j, lj) in l.iter_mut().enumerate() {
                *lj = euclidean(x, means.row(j));
            }
            let mut best = 0;
            for j in 1..k {
                if l[j] < l[best] {
                    best = j;
                }
            }
            *ai = best;
            self.upper[i] = l[best];
        }
        (n * k) as u64
    }

    fn next(&mut self, data: &Dataset, means: &Means, moved: &[f64], assign: &mut [usize]) -> (bool, u64) {
        let k = means.k;
        let (cc, half) = if self.simplified {
            (Vec::new(), Vec::new())
        } else {
            let cc = means.pairwise();
            let half = half_separation(&cc, k);
            (cc, half)
        };
        let mut changed = false;
        let mut count = 0;
        for (i, a) in assign.iter_mut().enumerate() {
            let l = &mut self.lower[i * k..(i + 1) * k];
            for (lj, m) in l.iter_mut().zip(moved) {
                *lj = (*lj - m).max(0.0);
            }
            let mut u = self.upper[i] + moved[*a];
            if !self.simplified && u < half[*a] {
                self.upper[i] = u;
                continue;
            }
            let x = data.row(i);
            let mut tight = false;
            let start = *a;
            for j in 0..k {
                if j == *a {
                    continue;
                }
                let sep = if self.simplified { 0.0 } else { 0.5 * cc[*a * k + j] };
                if u < l[j] || u < sep {
                    continue;
                }
                if !tight {
                    u = euclidean(x, means.row(*a));
                    l[*a] = u;
                    count += 1;
                    tight = true;
                    if u < l[j] || u < sep {
                        continue;
                    }
                }
                let d = euclidean(x, means.row(j));
                count += 1;
                l[j] = d;
                if better(d, j, u, *a) {
                    *a = j;
                    u = d;
                }
            }
            changed |= *a != start;
            self.upper[i] = u;
        }
        debug_check(data, means, assign, &self.upper, |i, j| {
            (j != assign[i]).then(|| self.lower[i * k + j])
        });
        (changed, count)
    }
}

#[derive(Clone, Copy, PartialEq)]
pub(crate) enum Search {
    Full,
    /// Candidates whose norm lies within `r` of the point's norm.
    Annulus,
    /// Candidates within `2u + 2·half_separation(a)` of the assigned center.
    Exponion,
}

/// Hamerly: one upper bound and one lower bound (on the second-nearest
/// center) per point. Annulus and Exponion only narrow the rescan.
pub(crate) struct Hamerly {
    search: Search,
    upper: Vec<f64>,
    lower: Vec<f64>,
    /// Annulus: second-nearest center from the last scan.
    second: Vec<usize>,
    /// Annulus: point norms.
    norms: Vec<f64>,
}

impl Hamerly {
    pub fn new(search: Search) -> Self {
        Hamerly { search, upper: Vec::new(), lower: Vec::new(), second: Vec::new(), norms: Vec::new() }
    }
}

/// Nearest and second-nearest among `candidates` (which must contain at
/// least two centers). `known` supplies already-computed distances.
fn two_nearest(
    x: &[f64],
    means: &Means,
    candidates: impl Iterator<Item = usize>,
    known: &[(usize, f64)],
    count: &mut u64,
) -> ((usize, f64), (usize, f64)) {
    let mut best = (usize::MAX, f64::INFINITY);
    let mut second = (usize::MAX, f64::INFINITY);
    for j in candidates {
        let d = match known.iter().find(|(c, _)| *c == j) {
            Some(&(_, d)) => d,
            None => {
                *count += 1;
                euclidean(x, means.row(j))
            }
        };
        if better(d, j, best.1, best.0) {
            second = best;
            best = (j, d);
        } else if d < second.1 {
            second = (j, d);
        }
    }
    (best, second)
}

/// Indices and norms of the centers, ordered by norm.
fn norm_order(means: &Means) -> Vec<(f64, usize)> {
    let mut v: Vec<(f64, usize)> =
        (0..means.k).map(|j| (norm(means.row(j)), j)).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    v
}

impl Hamerly {
    #[allow(clippy::too_many_arguments)]
    fn scan(
        &mut self,
        i: usize,
        x: &[f64],
        means: &Means,
        ctx: &ScanContext,
        a: usize,
        u: f64,
        count: &mut u64,
    ) -> usize {
        let k = means.k;
        let known = [(a, u)];
        let (best, second) = match self.search {
            Search::Full => two_nearest(x, means, 0..k, &known, count),
            Search::Annulus => {
                let b = self.second[i];
                let db = euclidean(x, means.row(b));
                *count += 1;
                let r = u.max(db) * (1.0 + RADIUS_SLACK);
                let xn = self.norms[i];
                let lo = ctx.norms.partition_point(|&(nm, _)| nm < xn - r);
                let hi = ctx.norms.partition_point(|&(nm, _)| nm <= xn + r);
                let known = [(a, u), (b, db)];
                let mut cand: Vec<usize> = ctx.norms[lo..hi].iter().map(|&(_, j)| j).collect();
                cand.extend([a, b]);
                cand.sort_unstable();
                cand.dedup();
                two_nearest(x, means, cand.into_iter(), &known, count)
            }
            Search::Exponion => {
                let r = (2.0 * u + 2.0 * ctx.half[a]) * (1.0 + RADIUS_SLACK);
                let row = &ctx.neighbours[a];
                let hi = row.partition_point(|&(d, _)| d <= r);
                let mut cand: Vec<usize> = row[..hi].iter().map(|&(_, j)| j).collect();
                cand.push(a);
                if cand.len() < 2 {
                    cand.push(row[0].1);
                }
                cand.sort_unstable();
                two_nearest(x, means, cand.into_iter(), &known, count)
            }
        };
        self.upper[i] = best.1;
        self.lower[i] = second.1;
        if self.search == Search::Annulus {
            self.second[i] = second.0;
        }
        best.0
    }
}

struct ScanContext {
    half: Vec<f64>,
    /// Annulus: centers sorted by norm.
    norms: Vec<(f64, usize)>,
    /// Exponion: for each center, the others sorted by distance from it.
    neighbours: Vec<Vec<(f64, usize)>>,
}

impl ScanContext {
    fn new(search: Search, means: &Means) -> Self {
        let k = means.k;
        let cc = means.pairwise();
        let half = half_separation(&cc, k);
        let norms = if search == Search::Annulus { norm_order(means) } else { Vec::new() };
        let neighbours = if search == Search::Exponion {
            (0..k)
                .map(|a| {
                    let mut row: Vec<(f64, usize)> =
                        (0..k).filter(|&j| j != a).map(|j| (cc[a * k + j], j)).collect();
                    row.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)));
                    row
                })
                .collect()
        } else {
            Vec::new()
        };
        ScanContext { half, norms, neighbours }
    }
}

impl Pruner for Hamerly {
    fn first(&mut self, data: &Dataset, means: &Means, assign: &mut [usize]) -> u64 {
        let (n, k) = (data.len(), means.k);
        self.upper = vec![0.0; n];
        self.lower = vec![0.0; n];
        self.second = vec![0; n];
        if self.search == Search::Annulus {
            self.norms = data.rows().map(norm).collect();
        }
        let mut count = 0;
        for (i, a) in assign.iter_mut().enumerate() {
            let ((b, db), (s, ds)) = two_nearest(data.row(i), means, 0..k, &[], &mut count);
            *a = b;
            self.upper[i] = db;
            self.lower[i] = if k > 1 { ds } else { f64::INFINITY };
            self.second[i] = if k > 1 { s } else { 0 };
        }
        count
    }

    fn next(&mut self, data: &Dataset, means: &Means, moved: &[f64], assign: &mut [usize]) -> (bool, u64) {
        let k = means.k;
        if k == 1 {
            return (false, 0);
        }
        let ctx = ScanContext::new(self.search, means);
        // largest and second-largest movement, so each point can subtract the
        // largest movement among the centers it is not assigned to
        let mut top = (usize::MAX, 0.0f64);
        let mut runner = 0.0f64;
        for (j, &m) in moved.iter().enumerate() {
            if m > top.1 {
                runner = top.1;
                top = (j, m);
            } else if m > runner {
                runner = m;
            }
        }
        let mut changed = false;
        let mut count = 0;
        for (i, a) in assign.iter_mut().enumerate() {
            self.upper[i] += moved[*a];
            self.lower[i] -= if *a == top.0 { runner } else { top.1 };
            let m = ctx.half[*a].max(self.lower[i]);
            if self.upper[i] < m {
                continue;
            }
            let x = data.row(i);
            let u = euclidean(x, means.row(*a));
            count += 1;
            self.upper[i] = u;
            if u < m {
                continue;
            }
            let b = self.scan(i, x, means, &ctx, *a, u, &mut count);
            changed |= b != *a;
            *a = b;
        }
        debug_check(data, means, assign, &self.upper, |i, j| (j != assign[i]).then(|| self.lower[i]));
        (changed, count)
    }
}

/// Exhaustive bound check on small inputs in debug builds: upper bounds must
/// not undercut the assigned distance and lower bounds must not exceed the
/// distance they bound.
fn debug_check(
    data: &Dataset,
    means: &Means,
    assign: &[usize],
    upper: &[f64],
    lower: impl Fn(usize, usize) -> Option<f64>,
) {
    if !cfg!(debug_assertions) || data.len() > 100 {
        return;
    }
    let tol = 1e-9;
    for i in 0..data.len() {
        let x = data.row(i);
        let da = euclidean(x, means.row(assign[i]));
        assert!(upper[i] + tol * (1.0 + da) >= da, "upper bound {} below {da} at point {i}", upper[i]);
        for j in 0..means.k {
            if let Some(l) = lower(i, j) {
                let d = euclidean(x, means.row(j));
                assert!(l <= d + tol * (1.0 + d), "lower bound {l} above {d} at point {i}, center {j}");
            }
        }
    }
}
