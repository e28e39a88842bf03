//! Agglomerative hierarchical clustering.
//!
//! Engines operate on a [`CondensedDistanceMatrix`] that is updated in place:
//! slot `s` initially holds point `s`, a merge of slots `a < b` keeps the
//! result in `a` and retires `b`. Every engine emits the same
//! [`MergeHistory`] representation, with original points numbered `0..n` and
//! merge `t` creating cluster id `n + t`. Ties are broken in favour of the
//! smallest `(min id, max id)` pair.

mod engine;
mod minimax;
mod slink;

use crate::error::{invalid, Error, Result};
use crate::linkage::LinkageScheme;
use crate::matrix::CondensedDistanceMatrix;

pub use minimax::{minimax_radius, MiniMaxAccel};
pub use slink::pointer_representation;

/// One merge: clusters `left < right` joined at `height` into a cluster of `size` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

/// A full dendrogram over `n` points as `n − 1` ordered merges.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeHistory {
    n: usize,
    merges: Vec<Merge>,
    prototypes: Option<Vec<usize>>,
}

impl MergeHistory {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Per-merge prototype point (MiniMax only).
    pub fn prototypes(&self) -> Option<&[usize]> {
        self.prototypes.as_deref()
    }

    pub fn heights(&self) -> Vec<f64> {
        self.merges.iter().map(|m| m.height).collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.merges.windows(2).all(|w| w[0].height <= w[1].height)
    }

    /// Builds a history from merges given as ids, checking structure.
    pub fn from_merges(n: usize, merges: Vec<Merge>) -> Result<Self> {
        let h = MergeHistory { n, merges, prototypes: None };
        h.validate()?;
        Ok(h)
    }

    /// Checks id consumption and size additivity.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n < 1 || self.merges.len() != n.saturating_sub(1) {
            return Err(invalid(format!("{} merges for {} points", self.merges.len(), n)));
        }
        let mut size = vec![1usize; n];
        size.extend(self.merges.iter().map(|m| m.size));
        let mut used = vec![false; 2 * n - 1];
        for (t, m) in self.merges.iter().enumerate() {
            let created = n + t;
            if m.left >= m.right || m.right >= created {
                return Err(invalid(format!("merge {t} refers to ids ({}, {})", m.left, m.right)));
            }
            for id in [m.left, m.right] {
                if std::mem::replace(&mut used[id], true) {
                    return Err(invalid(format!("cluster {id} merged twice")));
                }
            }
            if m.size != size[m.left] + size[m.right] {
                return Err(invalid(format!("merge {t} has inconsistent size {}", m.size)));
            }
            if !m.height.is_finite() {
                return Err(invalid(format!("merge {t} has non-finite height")));
            }
        }
        if let Some(p) = &self.prototypes {
            if p.len() != self.merges.len() || p.iter().any(|&x| x >= n) {
                return Err(invalid("prototype list does not match merges"));
            }
        }
        Ok(())
    }

    /// Merges re-ordered by height (stable) with ids renumbered accordingly.
    /// For monotone histories this is the identity.
    pub fn sorted_by_height(&self) -> MergeHistory {
        if self.is_monotone() {
            return self.clone();
        }
        let reps = self.representatives();
        let mut records: Vec<Record> = self
            .merges
            .iter()
            .enumerate()
            .map(|(t, m)| Record {
                a: reps[m.left],
                b: reps[m.right],
                height: m.height,
                prototype: self.prototypes.as_ref().map(|p| p[t]),
            })
            .collect();
        records.sort_by(|x, y| x.height.total_cmp(&y.height));
        build_history(self.n, &records)
    }

    /// One point (the smallest index) inside each cluster id.
    fn representatives(&self) -> Vec<usize> {
        let mut rep: Vec<usize> = (0..self.n).collect();
        for m in &self.merges {
            rep.push(rep[m.left].min(rep[m.right]));
        }
        rep
    }

    /// Pointer representation `(π, λ)`: each point's cluster is represented by
    /// its largest member; when two clusters join at height h, the smaller
    /// representative `a` gets `π(a)` = the larger one and `λ(a) = h`. The last
    /// point has `π = itself`, `λ = ∞`. Requires a monotone history.
    pub fn to_pointer(&self) -> (Vec<usize>, Vec<f64>) {
        let n = self.n;
        let mut last: Vec<usize> = (0..n).collect();
        let mut pi: Vec<usize> = (0..n).collect();
        let mut lambda = vec![f64::INFINITY; n];
        for m in &self.merges {
            let (a, b) = (last[m.left], last[m.right]);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            pi[lo] = hi;
            lambda[lo] = m.height;
            last.push(hi);
        }
        (pi, lambda)
    }

    /// Inverse of [`MergeHistory::to_pointer`].
    pub fn from_pointer(pi: &[usize], lambda: &[f64]) -> Result<Self> {
        let n = pi.len();
        if n == 0 || lambda.len() != n {
            return Err(invalid("pointer arrays must be non-empty and of equal length"));
        }
        let mut order: Vec<usize> = (0..n).filter(|&i| lambda[i].is_finite()).collect();
        if order.len() != n - 1 {
            return Err(invalid("exactly one point must have infinite lambda"));
        }
        order.sort_by(|&a, &b| lambda[a].total_cmp(&lambda[b]).then(a.cmp(&b)));
        let records: Vec<Record> = order
            .into_iter()
            .map(|i| Record { a: i, b: pi[i], height: lambda[i], prototype: None })
            .collect();
        if records.iter().any(|r| r.b >= n || r.b == r.a) {
            return Err(invalid("pointer target out of range"));
        }
        let h = build_history(n, &records);
        h.validate()?;
        Ok(h)
    }
}

/// A merge expressed through one member point of each side.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Record {
    pub a: usize,
    pub b: usize,
    pub height: f64,
    pub prototype: Option<usize>,
}

/// Union-find replay turning point-level records (already in output order)
/// into id-level merges.
pub(crate) fn build_history(n: usize, records: &[Record]) -> MergeHistory {
    let mut uf = UnionFind::new(n);
    let mut cluster_id: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    let mut merges = Vec::with_capacity(records.len());
    for (t, r) in records.iter().enumerate() {
        let (ra, rb) = (uf.find(r.a), uf.find(r.b));
        let (ia, ib) = (cluster_id[ra], cluster_id[rb]);
        let s = size[ra] + size[rb];
        let root = uf.union(ra, rb);
        cluster_id[root] = n + t;
        size[root] = s;
        merges.push(Merge { left: ia.min(ib), right: ia.max(ib), height: r.height, size: s });
    }
    let prototypes = if records.iter().all(|r| r.prototype.is_some()) && !records.is_empty() {
        Some(records.iter().map(|r| r.prototype.unwrap()).collect())
    } else {
        None
    };
    MergeHistory { n, merges, prototypes }
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins two roots and returns the new root.
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        let (hi, lo) = if self.rank[a] >= self.rank[b] { (a, b) } else { (b, a) };
        self.parent[lo] = hi;
        if self.rank[a] == self.rank[b] {
            self.rank[hi] += 1;
        }
        hi
    }
}

/// Exact greedy HAC: scans all live pairs for the minimum at every step. O(n³).
pub fn run_agnes(m: &CondensedDistanceMatrix, scheme: LinkageScheme) -> MergeHistory {
    engine::agnes(engine::LanceWilliams::new(m, scheme))
}

/// Greedy HAC with cached per-row nearest neighbours. Same output as [`run_agnes`].
pub fn run_anderberg(m: &CondensedDistanceMatrix, scheme: LinkageScheme) -> MergeHistory {
    engine::anderberg(engine::LanceWilliams::new(m, scheme))
}

/// Nearest-neighbour-chain HAC for reducible linkages. Merges are discovered
/// out of order and re-sorted by height (stable) before ids are assigned.
pub fn run_nnchain(m: &CondensedDistanceMatrix, scheme: LinkageScheme) -> Result<MergeHistory> {
    if !scheme.is_reducible() {
        return Err(Error::NonReducible(scheme.name()));
    }
    Ok(engine::nnchain(engine::LanceWilliams::new(m, scheme)))
}

/// Single linkage via SLINK's pointer representation. Equal to
/// `run_agnes(m, Single)`, including the order of tied merges.
pub fn run_slink(m: &CondensedDistanceMatrix) -> MergeHistory {
    slink::slink(m)
}

/// MiniMax linkage with the chosen search strategy.
pub fn run_minimax(m: &CondensedDistanceMatrix, accel: MiniMaxAccel) -> MergeHistory {
    minimax::run(m, accel)
}
