//! Generic AGNES / Anderberg / NN-chain drivers over a cluster workspace.

use super::{build_history, MergeHistory, Record};
use crate::linkage::LinkageScheme;
use crate::matrix::{offset, CondensedDistanceMatrix};

/// Live clusters, their ids and sizes, indexed by slot.
pub(crate) struct Forest {
    pub n: usize,
    pub active: Vec<usize>,
    pub id: Vec<usize>,
    pub size: Vec<usize>,
    merges: usize,
}

impl Forest {
    fn new(n: usize) -> Self {
        Forest { n, active: (0..n).collect(), id: (0..n).collect(), size: vec![1; n], merges: 0 }
    }

    #[inline]
    fn pair(&self, a: usize, b: usize) -> (usize, usize) {
        let (x, y) = (self.id[a], self.id[b]);
        if x < y {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// Strict ordering on candidate merges: distance, then id pair.
    #[inline]
    fn better(&self, d: f64, a: usize, b: usize, best_d: f64, best_a: usize, best_b: usize) -> bool {
        d < best_d || (d == best_d && self.pair(a, b) < self.pair(best_a, best_b))
    }

    fn retire(&mut self, keep: usize, drop: usize) {
        self.size[keep] += self.size[drop];
        self.id[keep] = self.n + self.merges;
        self.merges += 1;
        let pos = self.active.binary_search(&drop).expect("retired slot must be live");
        self.active.remove(pos);
    }
}

/// Cluster-to-cluster dissimilarities that can be updated after a merge.
pub(crate) trait Workspace {
    fn n(&self) -> usize;
    fn dist(&self, a: usize, b: usize) -> f64;
    /// Prototype of the cluster formed by merging slots `a` and `b`, if any.
    fn prototype(&self, _a: usize, _b: usize) -> Option<usize> {
        None
    }
    /// Folds slot `drop` into slot `keep` and refreshes distances from `keep`
    /// to every other live slot. `forest` still describes the state before
    /// the merge.
    fn merge(&mut self, keep: usize, drop: usize, forest: &Forest);
}

/// Lance-Williams updates over an owned condensed matrix.
pub(crate) struct LanceWilliams {
    n: usize,
    d: Vec<f64>,
    scheme: LinkageScheme,
}

impl LanceWilliams {
    pub fn new(m: &CondensedDistanceMatrix, scheme: LinkageScheme) -> Self {
        LanceWilliams { n: m.n(), d: m.clone().into_entries(), scheme }
    }

    #[inline]
    fn idx(&self, a: usize, b: usize) -> usize {
        if a < b {
            offset(self.n, a, b)
        } else {
            offset(self.n, b, a)
        }
    }
}

impl Workspace for LanceWilliams {
    fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn dist(&self, a: usize, b: usize) -> f64 {
        self.d[self.idx(a, b)]
    }

    fn merge(&mut self, keep: usize, drop: usize, forest: &Forest) {
        let d_ab = self.dist(keep, drop);
        let (sa, sb) = (forest.size[keep], forest.size[drop]);
        for &c in &forest.active {
            if c == keep || c == drop {
                continue;
            }
            let (ia, ib) = (self.idx(keep, c), self.idx(drop, c));
            self.d[ia] = self.scheme.combine(self.d[ia], self.d[ib], d_ab, sa, sb, forest.size[c]);
        }
    }
}

fn apply<W: Workspace>(ws: &mut W, forest: &mut Forest, a: usize, b: usize, records: &mut Vec<Record>) -> usize {
    let (keep, drop) = if a < b { (a, b) } else { (b, a) };
    records.push(Record { a: keep, b: drop, height: ws.dist(keep, drop), prototype: ws.prototype(keep, drop) });
    ws.merge(keep, drop, forest);
    forest.retire(keep, drop);
    keep
}

pub(crate) fn agnes<W: Workspace>(mut ws: W) -> MergeHistory {
    let n = ws.n();
    let mut forest = Forest::new(n);
    let mut records = Vec::with_capacity(n.saturating_sub(1));
    while forest.active.len() > 1 {
        let (mut ba, mut bb, mut bd) = (usize::MAX, usize::MAX, f64::INFINITY);
        for (p, &a) in forest.active.iter().enumerate() {
            for &b in &forest.active[p + 1..] {
                let d = ws.dist(a, b);
                if ba == usize::MAX || forest.better(d, a, b, bd, ba, bb) {
                    (ba, bb, bd) = (a, b, d);
                }
            }
        }
        apply(&mut ws, &mut forest, ba, bb, &mut records);
    }
    build_history(n, &records)
}

/// Nearest live neighbour of slot `a` under the id-pair tie rule.
fn nearest<W: Workspace>(ws: &W, forest: &Forest, a: usize) -> (usize, f64) {
    let (mut bc, mut bd) = (usize::MAX, f64::INFINITY);
    for &c in &forest.active {
        if c == a {
            continue;
        }
        let d = ws.dist(a, c);
        if bc == usize::MAX || forest.better(d, a, c, bd, a, bc) {
            (bc, bd) = (c, d);
        }
    }
    (bc, bd)
}

pub(crate) fn anderberg<W: Workspace>(mut ws: W) -> MergeHistory {
    let n = ws.n();
    let mut forest = Forest::new(n);
    let mut records = Vec::with_capacity(n.saturating_sub(1));
    // nn[a] = nearest live partner of slot a over the full row
    let mut nn: Vec<(usize, f64)> = (0..n).map(|a| nearest(&ws, &forest, a)).collect();
    while forest.active.len() > 1 {
        let mut best = usize::MAX;
        for &a in &forest.active {
            let (c, d) = nn[a];
            if best == usize::MAX || forest.better(d, a, c, nn[best].1, best, nn[best].0) {
                best = a;
            }
        }
        let (a, b) = (best, nn[best].0);
        let keep = apply(&mut ws, &mut forest, a, b, &mut records);
        let drop = a.max(b);
        nn[keep] = nearest(&ws, &forest, keep);
        for i in 0..forest.active.len() {
            let c = forest.active[i];
            if c == keep {
                continue;
            }
            let (p, pd) = nn[c];
            if p == keep || p == drop {
                nn[c] = nearest(&ws, &forest, c);
            } else {
                let d = ws.dist(c, keep);
                if forest.better(d, c, keep, pd, c, p) {
                    nn[c] = (keep, d);
                }
            }
        }
    }
    build_history(n, &records)
}

pub(crate) fn nnchain<W: Workspace>(mut ws: W) -> MergeHistory {
    let n = ws.n();
    let mut forest = Forest::new(n);
    let mut records = Vec::with_capacity(n.saturating_sub(1));
    let mut chain: Vec<usize> = Vec::with_capacity(n);
    while forest.active.len() > 1 {
        if chain.is_empty() {
            chain.push(forest.active[0]);
        }
        loop {
            let a = chain[chain.len() - 1];
            let prev = (chain.len() >= 2).then(|| chain[chain.len() - 2]);
            let (mut c, d) = nearest(&ws, &forest, a);
            // Ties with the previous chain element resolve to it, so the
            // chain cannot cycle.
            if let Some(p) = prev {
                if ws.dist(a, p) <= d {
                    c = p;
                }
            }
            if Some(c) == prev {
                break;
            }
            chain.push(c);
        }
        let a = chain.pop().unwrap();
        let b = chain.pop().unwrap();
        apply(&mut ws, &mut forest, a, b, &mut records);
    }
    records.sort_by(|x, y| x.height.total_cmp(&y.height));
    build_history(n, &records)
}
