mod common;

use clusterkit::extraction::{cut_by_height, cut_by_k, extract_with_noise};
use clusterkit::hac::{run_agnes, run_slink};
use clusterkit::{LinkageScheme, Metric, RngState};
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_link_cuts_are_threshold_components(seed in any::<u64>(), n in 2usize..40, q in 0.0f64..1.0) {
        let d = matrix(&random_points(&mut RngState::from_seed(seed), n, 2), Metric::Euclidean);
        let h = run_slink(&d);
        let mut e = d.entries().to_vec();
        e.sort_by(f64::total_cmp);
        let at = e[((e.len() - 1) as f64 * q) as usize];
        for t in [at, at * 0.999_999, (at + e[e.len() - 1]) / 2.0] {
            prop_assert!(same_partition(cut_by_height(&h, t).assignment(), &threshold_components(&d, t)));
        }
    }

    #[test]
    fn cuts_are_nested(seed in any::<u64>(), n in 2usize..30) {
        let d = matrix(&random_points(&mut RngState::from_seed(seed), n, 2), Metric::Euclidean);
        let h = run_agnes(&d, LinkageScheme::Complete);
        let mut prev = cut_by_k(&h, n).unwrap();
        prop_assert_eq!(prev.num_clusters(), n);
        for k in (1..n).rev() {
            let c = cut_by_k(&h, k).unwrap();
            prop_assert_eq!(c.num_clusters(), k);
            let (a, b) = (prev.assignment(), c.assignment());
            prop_assert!((0..n).all(|i| (0..n).all(|j| a[i] != a[j] || b[i] == b[j])));
            prev = c;
        }
    }

    #[test]
    fn noise_extraction_respects_minsize(seed in any::<u64>(), n in 2usize..40, k in 1usize..5, minsize in 1usize..6) {
        let d = matrix(&random_points(&mut RngState::from_seed(seed), n, 2), Metric::Euclidean);
        let h = run_agnes(&d, LinkageScheme::GroupAverage);
        let c = extract_with_noise(&h, k, minsize).unwrap();
        prop_assert!(c.num_clusters() <= k);
        prop_assert!(c.cluster_sizes().iter().all(|&s| s >= minsize));
        if minsize == 1 {
            prop_assert!(same_partition(c.assignment(), cut_by_k(&h, k.min(n)).unwrap().assignment()));
        }
    }
}

#[test]
fn inverted_histories_are_cut_in_height_order() {
    let data = clusterkit::Dataset::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0], [9.0, 9.0]]).unwrap();
    let h = run_agnes(&matrix(&data, Metric::SquaredEuclidean), LinkageScheme::Centroid);
    assert!(!h.is_monotone());
    let c = cut_by_k(&h, 2).unwrap();
    assert_eq!(c.assignment(), &[0, 0, 0, 1]);
}
