//! MacQueen k-means: bulk first pass, then per-point incremental mean updates.

use super::{finish, nearest, KMeansResult, Means};
use crate::data::Dataset;

pub(super) fn run(data: &Dataset, means: Means, maxiter: usize) -> KMeansResult {
    let (n, k, dim) = (data.len(), means.k, means.dim);
    let mut assign: Vec<usize> = (0..n).map(|i| nearest(data.row(i), &means).0).collect();
    let mut means = means.recompute(data, assign.iter().map(|&a| Some(a)));
    let mut sizes = vec![0usize; k];
    assign.iter().for_each(|&a| sizes[a] += 1);
    let mut per_iteration = vec![(n * k) as u64];
    while maxiter == 0 || per_iteration.len() < maxiter {
        let mut changed = false;
        for (i, a) in assign.iter_mut().enumerate() {
            let x = data.row(i);
            let b = nearest(x, &means).0;
            if b == *a {
                continue;
            }
            changed = true;
            let old = *a;
            if sizes[old] > 1 {
                let s = (sizes[old] - 1) as f64;
                for (m, v) in means.values[old * dim..(old + 1) * dim].iter_mut().zip(x) {
                    *m += (*m - v) / s;
                }
            }
            sizes[old] -= 1;
            sizes[b] += 1;
            let s = sizes[b] as f64;
            for (m, v) in means.values[b * dim..(b + 1) * dim].iter_mut().zip(x) {
                *m += (v - *m) / s;
            }
            *a = b;
        }
        per_iteration.push((n * k) as u64);
        if !changed {
            break;
        }
    }
    finish(data, assign.into_iter().map(|a| a as i32).collect(), means, per_iteration)
}
