//! k-means--: Lloyd iterations in which the `⌊rate·n⌋` points farthest from
//! their nearest mean are left out of the mean update.

use super::{finish, nearest, KMeansResult, Means};
use crate::clustering::NOISE;
use crate::data::Dataset;
use crate::error::{invalid, Result};
use crate::par::{self, Execution};

/// Indices of the `l` largest distances; equal distances flag the higher index first.
fn farthest(dist: &[f64], l: usize) -> Vec<bool> {
    let mut order: Vec<usize> = (0..dist.len()).collect();
    order.sort_by(|&p, &q| dist[q].total_cmp(&dist[p]).then(q.cmp(&p)));
    let mut flags = vec![false; dist.len()];
    order[..l].iter().for_each(|&i| flags[i] = true);
    flags
}

pub(super) fn run(data: &Dataset, mut means: Means, maxiter: usize, rate: f64, exec: Execution) -> Result<KMeansResult> {
    let n = data.len();
    if !(0.0..1.0).contains(&rate) {
        return Err(invalid(format!("k-means-- rate must lie in [0, 1), got {rate}")));
    }
    let l = (rate * n as f64).floor() as usize;
    if l >= n {
        return Err(invalid(format!("k-means-- would flag all {n} points as outliers")));
    }
    let mut assign: Vec<usize> = Vec::new();
    let mut outliers: Vec<bool> = Vec::new();
    let mut per_iteration = Vec::new();
    loop {
        let fresh = par::map_indices(exec, n, |i| nearest(data.row(i), &means));
        per_iteration.push((n * means.k) as u64);
        let dist: Vec<f64> = fresh.iter().map(|p| p.1).collect();
        let next_assign: Vec<usize> = fresh.iter().map(|p| p.0).collect();
        let next_outliers = farthest(&dist, l);
        let changed = next_assign != assign || next_outliers != outliers;
        assign = next_assign;
        outliers = next_outliers;
        if !changed {
            break;
        }
        means = means.recompute(data, assign.iter().zip(&outliers).map(|(&a, &o)| (!o).then_some(a)));
        if maxiter > 0 && per_iteration.len() >= maxiter {
            break;
        }
    }
    let labels = assign.iter().zip(&outliers).map(|(&a, &o)| if o { NOISE } else { a as i32 }).collect();
    Ok(finish(data, labels, means, per_iteration))
}
