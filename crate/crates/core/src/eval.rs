//! Internal validation indices.
//!
//! Noise points are ignored everywhere, and empty clusters do not count
//! towards k. Centroids are recomputed from the data. Everything except
//! the silhouette uses Euclidean geometry.

use crate::clustering::Clustering;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::matrix::Dissimilarity;
use crate::metric::{euclidean, squared_euclidean};
use crate::par::{self, Execution};

fn check_len(n: usize, c: &Clustering) -> Result<()> {
    if c.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: c.len() });
    }
    Ok(())
}

/// Non-empty clusters, each as a sorted member list.
fn groups(c: &Clustering) -> Vec<Vec<usize>> {
    c.members().into_iter().filter(|g| !g.is_empty()).collect()
}

fn centroid(data: &Dataset, members: &[usize]) -> Vec<f64> {
    let mut mu = vec![0.0; data.dim()];
    for &i in members {
        mu.iter_mut().zip(data.row(i)).for_each(|(m, v)| *m += v);
    }
    let n = members.len() as f64;
    mu.iter_mut().for_each(|m| *m /= n);
    mu
}

fn at_least_two(groups: &[Vec<usize>]) -> Result<()> {
    if groups.len() < 2 {
        return Err(Error::Degenerate(format!("needs at least 2 non-empty clusters, got {}", groups.len())));
    }
    Ok(())
}

/// Sum of squared distances to the cluster centroids.
pub fn sse(data: &Dataset, c: &Clustering) -> Result<f64> {
    check_len(data.len(), c)?;
    let gs = groups(c);
    if gs.is_empty() {
        return Err(Error::Degenerate("every point is noise".into()));
    }
    Ok(gs
        .iter()
        .map(|g| {
            let mu = centroid(data, g);
            g.iter().map(|&i| squared_euclidean(data.row(i), &mu)).sum::<f64>()
        })
        .sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Silhouette {
    pub mean: f64,
    /// `None` for noise points.
    pub per_point: Vec<Option<f64>>,
}

pub fn silhouette<D: Dissimilarity + ?Sized>(m: &D, c: &Clustering) -> Result<Silhouette> {
    silhouette_with(m, c, Execution::Sequential)
}

/// Silhouette with the per-point loop on the chosen executor.
pub fn silhouette_with<D: Dissimilarity + ?Sized>(m: &D, c: &Clustering, exec: Execution) -> Result<Silhouette> {
    check_len(m.len(), c)?;
    let gs = groups(c);
    at_least_two(&gs)?;
    let label = c.assignment();
    let mut slot = vec![usize::MAX; c.num_clusters()];
    for (s, g) in gs.iter().enumerate() {
        slot[label[g[0]] as usize] = s;
    }
    let per_point = par::map_indices(exec, m.len(), |i| {
        let own = slot[c.label(i)?];
        if gs[own].len() == 1 {
            return Some(0.0);
        }
        let mut a = 0.0;
        let mut b = f64::INFINITY;
        for (s, g) in gs.iter().enumerate() {
            let sum: f64 = g.iter().map(|&j| m.dist(i, j)).sum();
            if s == own {
                a = sum / (g.len() - 1) as f64;
            } else {
                b = b.min(sum / g.len() as f64);
            }
        }
        let scale = a.max(b);
        Some(if scale > 0.0 { (b - a) / scale } else { 0.0 })
    });
    let valid: Vec<f64> = per_point.iter().flatten().copied().collect();
    let mean = valid.iter().sum::<f64>() / valid.len() as f64;
    Ok(Silhouette { mean, per_point })
}

/// Silhouette with distances to centroids instead of average distances.
/// A point sitting on its own centroid scores 1 (0 if another centroid
/// coincides with it).
pub fn simplified_silhouette(data: &Dataset, c: &Clustering) -> Result<f64> {
    check_len(data.len(), c)?;
    let gs = groups(c);
    at_least_two(&gs)?;
    let mus: Vec<Vec<f64>> = gs.iter().map(|g| centroid(data, g)).collect();
    let mut total = 0.0;
    let mut count = 0usize;
    for (s, g) in gs.iter().enumerate() {
        for &i in g {
            let x = data.row(i);
            let a = euclidean(x, &mus[s]);
            let b = mus.iter().enumerate().filter(|(t, _)| *t != s).map(|(_, mu)| euclidean(x, mu)).fold(f64::INFINITY, f64::min);
            let scale = a.max(b);
            total += if scale > 0.0 { (b - a) / scale } else { 0.0 };
            count += 1;
        }
    }
    Ok(total / count as f64)
}

/// Mean over clusters of the worst (Sᵢ + Sⱼ) / Mᵢⱼ ratio.
pub fn davies_bouldin(data: &Dataset, c: &Clustering) -> Result<f64> {
    check_len(data.len(), c)?;
    let gs = groups(c);
    at_least_two(&gs)?;
    let mus: Vec<Vec<f64>> = gs.iter().map(|g| centroid(data, g)).collect();
    let spread: Vec<f64> = gs
        .iter()
        .zip(&mus)
        .map(|(g, mu)| g.iter().map(|&i| euclidean(data.row(i), mu)).sum::<f64>() / g.len() as f64)
        .collect();
    let k = gs.len();
    let mut total = 0.0;
    for i in 0..k {
        let mut worst = f64::NEG_INFINITY;
        for j in (0..k).filter(|&j| j != i) {
            let sep = euclidean(&mus[i], &mus[j]);
            if sep == 0.0 {
                return Err(Error::Degenerate(format!("clusters {i} and {j} have the same centroid")));
            }
            worst = worst.max((spread[i] + spread[j]) / sep);
        }
        total += worst;
    }
    Ok(total / k as f64)
}

/// Calinski-Harabasz: (BGSS / (k − 1)) / (WGSS / (n − k)).
pub fn variance_ratio(data: &Dataset, c: &Clustering) -> Result<f64> {
    check_len(data.len(), c)?;
    let gs = groups(c);
    let n: usize = gs.iter().map(Vec::len).sum();
    let k = gs.len();
    if k < 2 || k + 1 > n {
        return Err(Error::Degenerate(format!("variance ratio needs 2 ≤ k ≤ n − 1, got k = {k}, n = {n}")));
    }
    let all: Vec<usize> = gs.iter().flatten().copied().collect();
    let mu = centroid(data, &all);
    let mut bgss = 0.0;
    let mut wgss = 0.0;
    for g in &gs {
        let mi = centroid(data, g);
        bgss += g.len() as f64 * squared_euclidean(&mi, &mu);
        wgss += g.iter().map(|&i| squared_euclidean(data.row(i), &mi)).sum::<f64>();
    }
    if wgss == 0.0 {
        return Err(Error::Degenerate("within-group scatter is zero".into()));
    }
    Ok((bgss / (k - 1) as f64) / (wgss / (n - k) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::CondensedDistanceMatrix;
    use crate::metric::Metric;
    use proptest::prelude::*;

    fn d2() -> Dataset {
        Dataset::from_rows(&[[0.0, 0.0], [0.0, 1.0], [4.0, 0.0], [4.0, 1.0]]).unwrap()
    }

    fn labels(v: &[i32]) -> Clustering {
        Clustering::new(v.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9 * (1.0 + b.abs())
    }

    #[test]
    fn two_pairs() {
        let data = d2();
        let c = labels(&[0, 0, 1, 1]);
        let m = CondensedDistanceMatrix::from_data(&data, Metric::Euclidean).unwrap();
        assert_eq!(sse(&data, &c).unwrap(), 1.0);
        let b = (4.0 + 17f64.sqrt()) / 2.0;
        let s = silhouette(&m, &c).unwrap();
        assert!(close(s.mean, 1.0 - 1.0 / b));
        assert!((s.mean - 0.75379).abs() < 1e-5);
        let b = (16.0f64 + 0.25).sqrt();
        let ss = simplified_silhouette(&data, &c).unwrap();
        assert!(close(ss, 1.0 - 0.5 / b));
        assert!((ss - 0.87596).abs() < 1e-5);
        assert!(close(davies_bouldin(&data, &c).unwrap(), 0.25));
        assert!(close(variance_ratio(&data, &c).unwrap(), 32.0));
    }

    #[test]
    fn degenerate_inputs() {
        let data = d2();
        let m = CondensedDistanceMatrix::from_data(&data, Metric::Euclidean).unwrap();
        let one = labels(&[0, 0, 0, 0]);
        assert!(silhouette(&m, &one).is_err());
        assert!(simplified_silhouette(&data, &one).is_err());
        assert!(davies_bouldin(&data, &one).is_err());
        assert!(variance_ratio(&data, &one).is_err());
        assert!(sse(&data, &labels(&[-1, -1, -1, -1])).is_err());
        assert!(variance_ratio(&data, &labels(&[0, 1, 2, 3])).is_err());
        assert!(variance_ratio(&d2(), &labels(&[0, 0, 1, 1])).is_ok());
        let coincident = Dataset::from_rows(&[[0.0], [2.0], [1.0], [1.0]]).unwrap();
        assert!(davies_bouldin(&coincident, &labels(&[0, 0, 1, 1])).is_err());
        assert!(sse(&data, &labels(&[0, 0, 1])).is_err());
    }

    #[test]
    fn singletons_and_duplicates() {
        let data = d2();
        let m = CondensedDistanceMatrix::from_data(&data, Metric::Euclidean).unwrap();
        let each = labels(&[0, 1, 2, 3]);
        assert_eq!(sse(&data, &each).unwrap(), 0.0);
        assert_eq!(silhouette(&m, &each).unwrap().mean, 0.0);
        assert_eq!(simplified_silhouette(&data, &each).unwrap(), 1.0);
        let twins = Dataset::from_rows(&[[3.0], [3.0]]).unwrap();
        assert_eq!(sse(&twins, &labels(&[0, 0])).unwrap(), 0.0);
        let pair = Dataset::from_rows(&[[0.0], [1.0]]).unwrap();
        let pm = CondensedDistanceMatrix::from_data(&pair, Metric::Euclidean).unwrap();
        assert_eq!(silhouette(&pm, &labels(&[0, 1])).unwrap().mean, 0.0);
    }

    #[test]
    fn equal_distances_give_zero() {
        // all points coincide: a = b = 0
        let data = Dataset::from_rows(&[[1.0], [1.0], [1.0], [1.0]]).unwrap();
        let m = CondensedDistanceMatrix::from_data(&data, Metric::Euclidean).unwrap();
        let c = labels(&[0, 0, 1, 1]);
        assert_eq!(silhouette(&m, &c).unwrap().mean, 0.0);
        assert_eq!(simplified_silhouette(&data, &c).unwrap(), 0.0);
    }

    #[test]
    fn noise_is_ignored() {
        let data = Dataset::from_rows(&[[0.0, 0.0], [0.0, 1.0], [4.0, 0.0], [4.0, 1.0], [50.0, 50.0]]).unwrap();
        let m = CondensedDistanceMatrix::from_data(&data, Metric::Euclidean).unwrap();
        let with_noise = labels(&[0, 0, 1, 1, -1]);
        let s = silhouette(&m, &with_noise).unwrap();
        assert_eq!(s.per_point[4], None);
        assert!((s.mean - 0.75379).abs() < 1e-5);
        assert_eq!(sse(&data, &with_noise).unwrap(), 1.0);
        assert!(close(davies_bouldin(&data, &with_noise).unwrap(), 0.25));
        assert!(close(variance_ratio(&data, &with_noise).unwrap(), 32.0));
    }

    /// Calinski-Harabasz through the total-scatter identity T = B + W.
    fn vrc_oracle(data: &Dataset, c: &Clustering) -> f64 {
        let n = data.len() as f64;
        let k = c.num_clusters() as f64;
        let mu = data.mean();
        let total: f64 = data.rows().map(|x| squared_euclidean(x, &mu)).sum();
        let mut w = 0.0;
        for g in c.members() {
            let rows: Vec<&[f64]> = g.iter().map(|&i| data.row(i)).collect();
            for x in &rows {
                for y in &rows {
                    w += squared_euclidean(x, y) / (2.0 * rows.len() as f64);
                }
            }
        }
        ((total - w) / (k - 1.0)) / (w / (n - k))
    }

    fn random_labelled() -> impl Strategy<Value = (Dataset, Clustering)> {
        (6usize..40).prop_flat_map(|n| {
            (prop::collection::vec(-50.0f64..50.0, 2 * n), prop::collection::vec(0i32..4, n)).prop_filter_map(
                "need ≥ 2 clusters and a spare point",
                move |(v, l)| {
                    let c = Clustering::from_components(l.iter().map(|&x| Some(x)));
                    (c.num_clusters() >= 2 && c.num_clusters() < n)
                        .then(|| (Dataset::from_flat(2, v).unwrap(), c))
                },
            )
        })
    }

    proptest! {
        #[test]
        fn silhouette_in_range((data, c) in random_labelled()) {
            let m = CondensedDistanceMatrix::from_data(&data, Metric::Euclidean).unwrap();
            let s = silhouette(&m, &c).unwrap();
            prop_assert!(s.per_point.iter().flatten().all(|v| (-1.0..=1.0).contains(v)));
            prop_assert!((-1.0..=1.0).contains(&s.mean));
            prop_assert_eq!(&s, &silhouette_with(&m, &c, Execution::Parallel).unwrap());
            let ss = simplified_silhouette(&data, &c).unwrap();
            prop_assert!((-1.0..=1.0).contains(&ss));
        }

        #[test]
        fn variance_ratio_matches_oracle((data, c) in random_labelled()) {
            let v = variance_ratio(&data, &c).unwrap();
            prop_assert!((v - vrc_oracle(&data, &c)).abs() <= 1e-7 * (1.0 + v.abs()));
        }

        #[test]
        fn invariant_under_relabelling((data, c) in random_labelled(), shift in 1i32..4) {
            let k = c.num_clusters() as i32;
            let relabelled = Clustering::new(c.assignment().iter().map(|&l| (l + shift) % k).collect()).unwrap();
            let m = CondensedDistanceMatrix::from_data(&data, Metric::Euclidean).unwrap();
            let same = |a: f64, b: f64| (a - b).abs() <= 1e-9 * (1.0 + a.abs());
            prop_assert!(same(sse(&data, &c).unwrap(), sse(&data, &relabelled).unwrap()));
            prop_assert!(same(silhouette(&m, &c).unwrap().mean, silhouette(&m, &relabelled).unwrap().mean));
            prop_assert!(same(davies_bouldin(&data, &c).unwrap(), davies_bouldin(&data, &relabelled).unwrap()));
            prop_assert!(same(variance_ratio(&data, &c).unwrap(), variance_ratio(&data, &relabelled).unwrap()));
        }

        #[test]
        fn invariant_under_point_order((data, c) in random_labelled()) {
            let n = data.len();
            let rev: Vec<Vec<f64>> = (0..n).rev().map(|i| data.row(i).to_vec()).collect();
            let rdata = Dataset::from_rows(&rev).unwrap();
            let rc = Clustering::new(c.assignment().iter().rev().copied().collect()).unwrap();
            let same = |a: f64, b: f64| (a - b).abs() <= 1e-9 * (1.0 + a.abs());
            prop_assert!(same(simplified_silhouette(&data, &c).unwrap(), simplified_silhouette(&rdata, &rc).unwrap()));
            prop_assert!(same(variance_ratio(&data, &c).unwrap(), variance_ratio(&rdata, &rc).unwrap()));
        }
    }
}
