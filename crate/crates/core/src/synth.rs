//! Seeded synthetic data for tests, benchmarks and demos.

use rand_distr::{Distribution, StandardNormal};

use crate::data::Dataset;
use crate::rng::RngState;

/// `n` points drawn round-robin from isotropic Gaussians around `centers`.
/// Returns the data and the generating component of each point.
pub fn gaussian_mixture(n: usize, centers: &[Vec<f64>], sd: f64, seed: u64) -> (Dataset, Vec<usize>) {
    assert!(!centers.is_empty(), "need at least one component");
    let dim = centers[0].len();
    let mut rng = RngState::from_seed(seed);
    let mut values = Vec::with_capacity(n * dim);
    let mut truth = Vec::with_capacity(n);
    for i in 0..n {
        let c = i % centers.len();
        truth.push(c);
        for &mu in &centers[c] {
            let z: f64 = StandardNormal.sample(&mut rng);
            values.push(mu + sd * z);
        }
    }
    let data = Dataset::from_flat(dim, values).expect("finite by construction");
    (data, truth)
}

/// 200 points in 2-D from three unit-variance Gaussians.
pub fn three_gaussians(seed: u64) -> Dataset {
    let centers = [vec![0.0, 0.0], vec![6.0, 0.0], vec![3.0, 5.0]];
    gaussian_mixture(200, &centers, 1.0, seed).0
}
