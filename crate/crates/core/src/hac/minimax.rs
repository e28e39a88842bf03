//! MiniMax linkage: the distance of two clusters is the smallest radius of a
//! ball centred on one of their members that covers their union; the centre is
//! recorded as the merged cluster's prototype.

use super::engine::{self, Forest, Workspace};
use super::MergeHistory;
use crate::matrix::{offset, CondensedDistanceMatrix};

/// Search strategy for the MiniMax merge sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MiniMaxAccel {
    /// Full pairwise scan per merge.
    Matrix,
    /// Cached nearest neighbours.
    Anderberg,
    /// Nearest-neighbour chain.
    NNChain,
}

impl MiniMaxAccel {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "matrix" | "agnes" => Some(MiniMaxAccel::Matrix),
            "anderberg" => Some(MiniMaxAccel::Anderberg),
            "nnchain" => Some(MiniMaxAccel::NNChain),
            _ => None,
        }
    }
}

/// Minimax radius and prototype of a point set (ties → lowest point index).
pub fn minimax_radius(m: &CondensedDistanceMatrix, members: &[usize]) -> (f64, usize) {
    let mut best = (f64::INFINITY, usize::MAX);
    for &p in members {
        let r = members.iter().map(|&q| m.get(p, q)).fold(0.0, f64::max);
        if r < best.0 || (r == best.0 && p < best.1) {
            best = (r, p);
        }
    }
    best
}

struct MiniMax<'a> {
    m: &'a CondensedDistanceMatrix,
    n: usize,
    d: Vec<f64>,
    proto: Vec<usize>,
    members: Vec<Vec<usize>>,
    /// Largest distance from each point to a member of its own cluster.
    intra: Vec<f64>,
}

impl<'a> MiniMax<'a> {
    fn new(m: &'a CondensedDistanceMatrix) -> Self {
        let n = m.n();
        let mut proto = Vec::with_capacity(m.entries().len());
        for i in 0..n {
            proto.extend(std::iter::repeat_n(i, n - i - 1));
        }
        MiniMax {
            m,
            n,
            d: m.entries().to_vec(),
            proto,
            members: (0..n).map(|i| vec![i]).collect(),
            intra: vec![0.0; n],
        }
    }

    #[inline]
    fn idx(&self, a: usize, b: usize) -> usize {
        if a < b {
            offset(self.n, a, b)
        } else {
            offset(self.n, b, a)
        }
    }

    /// Largest distance from each member of `xs` to any member of `ys`.
    fn cross_max(&self, xs: &[usize], ys: &[usize]) -> (Vec<f64>, Vec<f64>) {
        let mut mx = vec![0.0f64; xs.len()];
        let mut my = vec![0.0f64; ys.len()];
        for (i, &p) in xs.iter().enumerate() {
            for (j, &q) in ys.iter().enumerate() {
                let d = self.m.get(p, q);
                mx[i] = mx[i].max(d);
                my[j] = my[j].max(d);
            }
        }
        (mx, my)
    }
}

impl Workspace for MiniMax<'_> {
    fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn dist(&self, a: usize, b: usize) -> f64 {
        self.d[self.idx(a, b)]
    }

    fn prototype(&self, a: usize, b: usize) -> Option<usize> {
        Some(self.proto[self.idx(a, b)])
    }

    fn merge(&mut self, keep: usize, drop: usize, forest: &Forest) {
        let moved = std::mem::take(&mut self.members[drop]);
        let (mk, md) = self.cross_max(&self.members[keep], &moved);
        for (&p, x) in self.members[keep].iter().zip(mk) {
            self.intra[p] = self.intra[p].max(x);
        }
        for (&p, x) in moved.iter().zip(md) {
            self.intra[p] = self.intra[p].max(x);
        }
        self.members[keep].extend(moved);

        for &c in &forest.active {
            if c == keep || c == drop {
                continue;
            }
            let (mk, mc) = self.cross_max(&self.members[keep], &self.members[c]);
            let mut best = (f64::INFINITY, usize::MAX);
            let candidates = self.members[keep].iter().zip(mk).chain(self.members[c].iter().zip(mc));
            for (&p, cross) in candidates {
                let r = self.intra[p].max(cross);
                if r < best.0 || (r == best.0 && p < best.1) {
                    best = (r, p);
                }
            }
            let i = self.idx(keep, c);
            self.d[i] = best.0;
            self.proto[i] = best.1;
        }
    }
}

pub(super) fn run(m: &CondensedDistanceMatrix, accel: MiniMaxAccel) -> MergeHistory {
    let ws = MiniMax::new(m);
    match accel {
        MiniMaxAccel::Matrix => engine::agnes(ws),
        MiniMaxAccel::Anderberg => engine::anderberg(ws),
        MiniMaxAccel::NNChain => engine::nnchain(ws),
    }
}
