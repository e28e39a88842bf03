//! Brute-force oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use clusterkit::hac::MergeHistory;
use clusterkit::metric::squared_euclidean;
use clusterkit::{CondensedDistanceMatrix, Dataset, Metric, RngState};

pub const TOL: f64 = 1e-9;

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * (1.0 + a.abs().max(b.abs()))
}

/// `n` points uniform in `[0, 100)^dim`.
pub fn random_points(rng: &mut RngState, n: usize, dim: usize) -> Dataset {
    let values = (0..n * dim).map(|_| rng.next_f64() * 100.0).collect();
    Dataset::from_flat(dim, values).unwrap()
}

pub fn matrix(data: &Dataset, metric: Metric) -> CondensedDistanceMatrix {
    CondensedDistanceMatrix::from_data(data, metric).unwrap()
}

/// Members of the two clusters joined by each merge, in merge order.
pub fn replay(h: &MergeHistory) -> Vec<(Vec<usize>, Vec<usize>, f64)> {
    let n = h.n();
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut out = Vec::new();
    for m in h.merges() {
        let a = members[m.left].clone();
        let b = members[m.right].clone();
        let mut u = a.clone();
        u.extend(&b);
        u.sort_unstable();
        members.push(u);
        out.push((a, b, m.height));
    }
    out
}

/// Closed-form or definitional linkage between two point sets.
#[derive(Debug, Clone, Copy)]
pub enum Oracle {
    Single,
    Complete,
    /// Mean pairwise distance.
    Average,
    /// 2·|A||B|/(|A|+|B|)·‖μA − μB‖² (squared Euclidean input).
    Ward,
    /// ‖μA − μB‖² (squared Euclidean input).
    Centroid,
}

fn mean(data: &Dataset, idx: &[usize]) -> Vec<f64> {
    let mut mu = vec![0.0; data.dim()];
    for &i in idx {
        mu.iter_mut().zip(data.row(i)).for_each(|(m, v)| *m += v);
    }
    mu.iter_mut().for_each(|m| *m /= idx.len() as f64);
    mu
}

impl Oracle {
    pub fn linkage(self, data: &Dataset, d: &CondensedDistanceMatrix, a: &[usize], b: &[usize]) -> f64 {
        let pairs = || a.iter().flat_map(|&i| b.iter().map(move |&j| d.get(i, j)));
        match self {
            Oracle::Single => pairs().fold(f64::INFINITY, f64::min),
            Oracle::Complete => pairs().fold(f64::NEG_INFINITY, f64::max),
            Oracle::Average => pairs().sum::<f64>() / (a.len() * b.len()) as f64,
            Oracle::Ward => {
                let (na, nb) = (a.len() as f64, b.len() as f64);
                2.0 * na * nb / (na + nb) * squared_euclidean(&mean(data, a), &mean(data, b))
            }
            Oracle::Centroid => squared_euclidean(&mean(data, a), &mean(data, b)),
        }
    }
}

/// Checks that every merge joins a closest pair of current clusters and
/// that its height is the oracle linkage of that pair.
pub fn check_greedy(h: &MergeHistory, data: &Dataset, d: &CondensedDistanceMatrix, oracle: Oracle) -> Result<(), String> {
    let n = h.n();
    let mut live: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut ids: Vec<usize> = (0..n).collect();
    for (step, m) in h.merges().iter().enumerate() {
        let pa = ids.iter().position(|&x| x == m.left).ok_or("left id not live")?;
        let pb = ids.iter().position(|&x| x == m.right).ok_or("right id not live")?;
        let got = oracle.linkage(data, d, &live[pa], &live[pb]);
        if !close(got, m.height) {
            return Err(format!("merge {step}: height {} but {oracle:?} linkage is {got}", m.height));
        }
        for x in 0..live.len() {
            for y in x + 1..live.len() {
                let v = oracle.linkage(data, d, &live[x], &live[y]);
                if v < m.height - TOL * (1.0 + v.abs()) {
                    return Err(format!("merge {step} at {} skipped a closer pair at {v}", m.height));
                }
            }
        }
        let mut u = live[pa].clone();
        u.extend(live[pb].iter());
        let (lo, hi) = (pa.min(pb), pa.max(pb));
        live.remove(hi);
        ids.remove(hi);
        live[lo] = u;
        ids[lo] = n + step;
    }
    Ok(())
}

/// Sorted minimum-spanning-tree edge weights (Prim).
pub fn mst_weights(d: &CondensedDistanceMatrix) -> Vec<f64> {
    let n = d.n();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    best[0] = 0.0;
    for step in 0..n {
        let u = (0..n).filter(|&i| !in_tree[i]).min_by(|&a, &b| best[a].total_cmp(&best[b])).unwrap();
        in_tree[u] = true;
        if step > 0 {
            out.push(best[u]);
        }
        for v in 0..n {
            if !in_tree[v] {
                best[v] = best[v].min(d.get(u, v));
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Exhaustive minimax radius and prototype of a set (ties → lowest index).
pub fn minimax(d: &CondensedDistanceMatrix, set: &[usize]) -> (f64, usize) {
    let mut best = (f64::INFINITY, usize::MAX);
    for &p in set {
        let r = set.iter().map(|&q| d.get(p, q)).fold(0.0, f64::max);
        if r < best.0 || (r == best.0 && p < best.1) {
            best = (r, p);
        }
    }
    best
}

/// Checks each MiniMax merge against exhaustive search over the current clusters.
pub fn check_minimax(h: &clusterkit::MergeHistory, d: &CondensedDistanceMatrix) -> Result<(), String> {
    let protos = h.prototypes().ok_or("no prototypes")?;
    let mut live: Vec<Vec<usize>> = (0..d.n()).map(|i| vec![i]).collect();
    for (step, (a, b, height)) in replay(h).into_iter().enumerate() {
        let mut best = f64::INFINITY;
        for x in 0..live.len() {
            for y in x + 1..live.len() {
                let u: Vec<usize> = live[x].iter().chain(&live[y]).copied().collect();
                best = best.min(minimax(d, &u).0);
            }
        }
        let mut u: Vec<usize> = a.iter().chain(&b).copied().collect();
        u.sort_unstable();
        let (radius, proto) = minimax(d, &u);
        if !(radius == height && height == best) {
            return Err(format!("merge {step}: height {height}, radius {radius}, best {best}"));
        }
        if proto != protos[step] {
            return Err(format!("merge {step}: prototype {} vs {proto}", protos[step]));
        }
        live.retain(|c| *c != a && *c != b);
        live.push(u);
    }
    Ok(())
}

/// Connected components of the graph with an edge wherever d ≤ t.
pub fn threshold_components(d: &CondensedDistanceMatrix, t: f64) -> Vec<usize> {
    let n = d.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if d.get(i, j) <= t {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect()
}

/// Whether two labelings describe the same partition (noise must match exactly).
pub fn same_partition<A: PartialEq + Copy, B: PartialEq + Copy>(a: &[A], b: &[B]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

/// Total deviation of a medoid set.
pub fn total_deviation(d: &CondensedDistanceMatrix, medoids: &[usize]) -> f64 {
    (0..d.n()).map(|o| medoids.iter().map(|&m| d.get(o, m)).fold(f64::INFINITY, f64::min)).sum()
}
