//! Flat clusterings cut from a [`MergeHistory`].
//!
//! All cuts operate on the height-sorted merge list, so histories with
//! inversions (centroid, median) are handled the same way as monotone ones.
//! Clusters are numbered by their lowest member index.

use crate::clustering::Clustering;
use crate::error::{invalid, Result};
use crate::hac::{MergeHistory, UnionFind};

/// Components after applying the first `t` merges of a height-sorted history.
fn components(sorted: &MergeHistory, t: usize) -> UnionFind {
    let n = sorted.n();
    let mut uf = UnionFind::new(n);
    // rep[id] = some point inside cluster id
    let mut rep: Vec<usize> = (0..n).collect();
    for m in &sorted.merges()[..t] {
        let (a, b) = (rep[m.left], rep[m.right]);
        uf.union(a, b);
        rep.push(a);
    }
    uf
}

fn label_components(uf: &mut UnionFind, n: usize) -> Clustering {
    Clustering::from_components((0..n).map(|i| Some(uf.find(i))))
}

/// Applies every merge with height ≤ `threshold`.
pub fn cut_by_height(h: &MergeHistory, threshold: f64) -> Clustering {
    let sorted = h.sorted_by_height();
    let t = sorted.merges().partition_point(|m| m.height <= threshold);
    let mut uf = components(&sorted, t);
    label_components(&mut uf, h.n())
}

/// Applies the first `n − k` merges in height order, leaving exactly `k` clusters.
pub fn cut_by_k(h: &MergeHistory, k: usize) -> Result<Clustering> {
    let n = h.n();
    if k == 0 || k > n {
        return Err(invalid(format!("k must lie in 1..={n}, got {k}")));
    }
    let sorted = h.sorted_by_height();
    let mut uf = components(&sorted, n - k);
    Ok(label_components(&mut uf, n))
}

/// The highest cut that keeps exactly `k` clusters of at least `minsize`
/// points while every other component is a single point (reported as noise).
///
/// When no cut admits `k` such clusters, `k` is relaxed downwards until one
/// does; the achieved value is the result's `num_clusters()`. If even `k = 1`
/// is impossible (fewer than `minsize` points) everything is noise.
pub fn extract_with_noise(h: &MergeHistory, k: usize, minsize: usize) -> Result<Clustering> {
    if k == 0 || minsize == 0 {
        return Err(invalid("k and minsize must be at least 1"));
    }
    let n = h.n();
    let sorted = h.sorted_by_height();
    // For every cut position t: number of components with size ≥ minsize, and
    // number of components that are neither large nor singletons.
    let mut size: Vec<usize> = vec![1; n];
    let class = |s: usize| -> (usize, usize) {
        if s >= minsize {
            (1, 0)
        } else if s > 1 {
            (0, 1)
        } else {
            (0, 0)
        }
    };
    let (mut large, mut medium) = if minsize <= 1 { (n, 0) } else { (0, 0) };
    let mut profile = Vec::with_capacity(n);
    profile.push((large, medium));
    for m in sorted.merges() {
        let (sl, sr) = (size[m.left], size[m.right]);
        for s in [sl, sr] {
            let (l, md) = class(s);
            large -= l;
            medium -= md;
        }
        let (l, md) = class(sl + sr);
        large += l;
        medium += md;
        size.push(sl + sr);
        profile.push((large, medium));
    }

    let chosen = (1..=k.min(n))
        .rev()
        .find_map(|want| (0..n).rev().find(|&t| profile[t] == (want, 0)));
    let Some(t) = chosen else {
        return Ok(Clustering::from_components((0..n).map(|_| None::<usize>)));
    };

    let mut uf = components(&sorted, t);
    let mut count = vec![0usize; n];
    for i in 0..n {
        count[uf.find(i)] += 1;
    }
    Ok(Clustering::from_components((0..n).map(|i| {
        let r = uf.find(i);
        (count[r] >= minsize).then_some(r)
    })))
}
