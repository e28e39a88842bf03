//! SLINK single-linkage in O(n²) time and O(n) extra memory.

use std::collections::BTreeSet;

use super::{build_history, MergeHistory, Record, UnionFind};
use crate::matrix::CondensedDistanceMatrix;

/// SLINK pointer representation `(π, λ)` of the single-linkage dendrogram.
pub fn pointer_representation(m: &CondensedDistanceMatrix) -> (Vec<usize>, Vec<f64>) {
    let n = m.n();
    let mut pi = vec![0usize; n];
    let mut lambda = vec![f64::INFINITY; n];
    let mut mrow = vec![0.0f64; n];
    for i in 0..n {
        pi[i] = i;
        lambda[i] = f64::INFINITY;
        for (j, slot) in mrow.iter_mut().enumerate().take(i) {
            *slot = m.get(i, j);
        }
        for j in 0..i {
            let p = pi[j];
            if lambda[j] >= mrow[j] {
                mrow[p] = mrow[p].min(lambda[j]);
                lambda[j] = mrow[j];
                pi[j] = i;
            } else {
                mrow[p] = mrow[p].min(mrow[j]);
            }
        }
        for j in 0..i {
            if lambda[j] >= lambda[pi[j]] {
                pi[j] = i;
            }
        }
    }
    (pi, lambda)
}

/// Converts SLINK's output to a [`MergeHistory`] whose merge order follows the
/// id-pair tie rule used by the matrix engines.
///
/// Merges at distinct heights are unambiguous. When several merges share a
/// height, every current cluster pair at exactly that single-link distance is
/// a candidate; those are replayed smallest id pair first.
pub(super) fn slink(m: &CondensedDistanceMatrix) -> MergeHistory {
    let n = m.n();
    let (pi, lambda) = pointer_representation(m);
    let mut order: Vec<usize> = (0..n).filter(|&i| lambda[i].is_finite()).collect();
    order.sort_by(|&a, &b| lambda[a].total_cmp(&lambda[b]).then(a.cmp(&b)));

    let mut uf = UnionFind::new(n);
    let mut id: Vec<usize> = (0..n).collect();
    let mut records = Vec::with_capacity(n.saturating_sub(1));
    let mut start = 0;
    while start < order.len() {
        let h = lambda[order[start]];
        let mut end = start + 1;
        while end < order.len() && lambda[order[end]] == h {
            end += 1;
        }
        if end - start == 1 {
            let i = order[start];
            let (ra, rb) = (uf.find(i), uf.find(pi[i]));
            let root = uf.union(ra, rb);
            id[root] = n + records.len();
            records.push(Record { a: i, b: pi[i], height: h, prototype: None });
        } else {
            replay_ties(m, &order[start..end], &pi, h, &mut uf, &mut id, &mut records);
        }
        start = end;
    }
    build_history(n, &records)
}

fn replay_ties(
    m: &CondensedDistanceMatrix,
    group: &[usize],
    pi: &[usize],
    h: f64,
    uf: &mut UnionFind,
    id: &mut [usize],
    records: &mut Vec<Record>,
) {
    let n = m.n();
    // Clusters touched by this height, with their members.
    let mut roots: Vec<usize> = group.iter().flat_map(|&i| [uf.find(i), uf.find(pi[i])]).collect();
    roots.sort_unstable();
    roots.dedup();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); roots.len()];
    for p in 0..n {
        let r = uf.find(p);
        if let Ok(k) = roots.binary_search(&r) {
            members[k].push(p);
        }
    }
    // Candidate merges: cluster pairs with some cross distance exactly h.
    let c = roots.len();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); c];
    for x in 0..c {
        for y in x + 1..c {
            let touches = members[x].iter().any(|&p| members[y].iter().any(|&q| m.get(p, q) == h));
            if touches {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
    }
    let mut alive = vec![true; c];
    let mut cid: Vec<usize> = roots.iter().map(|&r| id[r]).collect();
    loop {
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for x in (0..c).filter(|&x| alive[x]) {
            for &y in adj[x].iter().filter(|&&y| y > x) {
                let key = (cid[x].min(cid[y]), cid[x].max(cid[y]));
                if best.is_none_or(|b| key < (b.0, b.1)) {
                    best = Some((key.0, key.1, x, y));
                }
            }
        }
        let Some((_, _, x, y)) = best else { break };
        let (px, py) = (members[x][0], members[y][0]);
        let root = uf.union(px, py);
        let new_id = n + records.len();
        id[root] = new_id;
        records.push(Record { a: px, b: py, height: h, prototype: None });
        // y folds into x
        alive[y] = false;
        cid[x] = new_id;
        let ny = std::mem::take(&mut adj[y]);
        for z in ny {
            adj[z].remove(&y);
            if z != x {
                adj[z].insert(x);
                adj[x].insert(z);
            }
        }
        adj[x].remove(&x);
        let my = std::mem::take(&mut members[y]);
        members[x].extend(my);
    }
}
