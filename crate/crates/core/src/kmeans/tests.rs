use super::*;
use crate::synth::three_gaussians;
use proptest::prelude::*;

fn d2() -> Dataset {
    Dataset::from_rows(&[[0.0, 0.0], [0.0, 1.0], [4.0, 0.0], [4.0, 1.0]]).unwrap()
}

fn cfg(k: usize, variant: Variant) -> KMeansConfig {
    KMeansConfig::new(k, variant).execution(Execution::Sequential)
}

/// Textbook Lloyd, written independently of the driver.
fn naive_lloyd(data: &Dataset, centers: &[Vec<f64>], iters: usize) -> (Vec<usize>, Vec<Vec<f64>>) {
    let mut means = centers.to_vec();
    let mut assign: Vec<usize> = Vec::new();
    for _ in 0..iters {
        let next: Vec<usize> = data
            .rows()
            .map(|x| {
                let d: Vec<f64> = means.iter().map(|m| euclidean(x, m)).collect();
                (0..d.len()).fold(0, |b, j| if d[j] < d[b] { j } else { b })
            })
            .collect();
        if next == assign {
            break;
        }
        assign = next;
        for (j, m) in means.iter_mut().enumerate() {
            let members: Vec<&[f64]> = data.rows().zip(&assign).filter(|(_, &a)| a == j).map(|(x, _)| x).collect();
            if !members.is_empty() {
                for (c, v) in m.iter_mut().enumerate() {
                    *v = members.iter().map(|x| x[c]).sum::<f64>() / members.len() as f64;
                }
            }
        }
    }
    (assign, means)
}

fn labels(r: &KMeansResult) -> Vec<usize> {
    r.clustering.assignment().iter().map(|&a| a as usize).collect()
}

#[test]
fn lloyd_on_two_pairs() {
    let centers = vec![vec![0.0, 0.0], vec![4.0, 0.0]];
    let r = run_kmeans(&d2(), &cfg(2, Variant::Lloyd), &centers).unwrap();
    assert_eq!(r.clustering.assignment(), &[0, 0, 1, 1]);
    assert_eq!(r.means, vec![vec![0.0, 0.5], vec![4.0, 0.5]]);
    assert_eq!(r.sse, 1.0);
    assert_eq!(r.iterations, 2);
    assert_eq!(r.distance_computations, 16);
    assert_eq!(r.clustering.prototypes, Prototypes::Means(r.means.clone()));
}

#[test]
fn every_variant_reproduces_lloyd_on_two_pairs() {
    let centers = vec![vec![0.0, 0.0], vec![4.0, 0.0]];
    for v in Variant::EXACT {
        let r = run_kmeans(&d2(), &cfg(2, v), &centers).unwrap();
        assert_eq!(r.clustering.assignment(), &[0, 0, 1, 1], "{}", v.name());
        assert_eq!(r.means, vec![vec![0.0, 0.5], vec![4.0, 0.5]], "{}", v.name());
        assert!(r.distance_computations <= 16, "{} used {}", v.name(), r.distance_computations);
    }
}

#[test]
fn single_cluster_is_the_centroid() {
    let data = d2();
    for v in Variant::EXACT.into_iter().chain([Variant::MacQueen]) {
        let r = run_kmeans(&data, &cfg(1, v), &[vec![9.0, 9.0]]).unwrap();
        assert_eq!(r.means, vec![vec![2.0, 0.5]], "{}", v.name());
        assert_eq!(r.sse, 4.0 * 4.0 + 4.0 * 0.25);
    }
}

#[test]
fn rejects_bad_centers() {
    let data = d2();
    let dup = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
    assert!(matches!(run_kmeans(&data, &cfg(2, Variant::Lloyd), &dup), Err(Error::DuplicateCenters(0, 1))));
    let five = vec![vec![0.0, 0.0]; 5];
    assert!(run_kmeans(&data, &cfg(5, Variant::Lloyd), &five).is_err());
    assert!(run_kmeans(&data, &cfg(2, Variant::Lloyd), &[vec![0.0], vec![1.0]]).is_err());
    assert!(run_kmeans(&data, &cfg(2, Variant::Lloyd), &[vec![0.0, 0.0]]).is_err());
}

#[test]
fn empty_cluster_keeps_its_mean() {
    let centers = vec![vec![0.0, 0.5], vec![100.0, 100.0], vec![4.0, 0.5]];
    for v in Variant::EXACT {
        let r = run_kmeans(&d2(), &cfg(3, v), &centers).unwrap();
        assert_eq!(r.means[1], vec![100.0, 100.0], "{}", v.name());
        assert_eq!(r.clustering.assignment(), &[0, 0, 2, 2]);
    }
}

#[test]
fn minusminus_flags_the_far_point() {
    let data = Dataset::from_rows(&[[0.0], [1.0], [9.0], [10.0], [100.0]]).unwrap();
    let c = cfg(2, Variant::MinusMinus { rate: 0.2 });
    let r = run_kmeans_minusminus(&data, &c, &[vec![0.0], vec![9.0]]).unwrap();
    assert_eq!(r.clustering.assignment(), &[0, 0, 1, 1, -1]);
    assert_eq!(r.means, vec![vec![0.5], vec![9.5]]);
    assert_eq!(r.sse, 1.0);
    assert!(run_kmeans_minusminus(&data, &cfg(2, Variant::Lloyd), &[vec![0.0], vec![9.0]]).is_err());
}

#[test]
fn minusminus_without_outliers_is_lloyd() {
    let data = three_gaussians(3);
    let centers: Vec<Vec<f64>> = (0..4).map(|i| data.row(i * 7).to_vec()).collect();
    let a = run_kmeans(&data, &cfg(4, Variant::MinusMinus { rate: 0.001 }), &centers).unwrap();
    let b = run_kmeans(&data, &cfg(4, Variant::Lloyd), &centers).unwrap();
    assert_eq!(a.clustering.assignment(), b.clustering.assignment());
    assert_eq!(a.means, b.means);
}

#[test]
fn minusminus_tie_flags_highest_index() {
    let data = Dataset::from_rows(&[[2.0], [2.0], [2.0]]).unwrap();
    let r = run_kmeans(&data, &cfg(1, Variant::MinusMinus { rate: 0.4 }), &[vec![2.0]]).unwrap();
    assert_eq!(r.clustering.assignment(), &[0, 0, -1]);
    assert_eq!(r.means, vec![vec![2.0]]);
    assert!(run_kmeans(&data, &cfg(1, Variant::MinusMinus { rate: 0.99 }), &[vec![2.0]]).is_ok());
    let tiny = Dataset::from_rows(&[[2.0]]).unwrap();
    assert!(run_kmeans(&tiny, &cfg(1, Variant::MinusMinus { rate: 0.99 }), &[vec![2.0]]).is_ok());
}

#[test]
fn macqueen_ends_at_nearest_assignment() {
    let data = three_gaussians(11);
    let centers: Vec<Vec<f64>> = (0..5).map(|i| data.row(i).to_vec()).collect();
    let r = run_kmeans(&data, &cfg(5, Variant::MacQueen), &centers).unwrap();
    let means = Means::from_rows(&r.means, 2).unwrap();
    for (i, &a) in r.clustering.assignment().iter().enumerate() {
        assert_eq!(nearest(data.row(i), &means).0, a as usize);
    }
}

#[test]
fn lloyd_matches_the_textbook_oracle() {
    let data = three_gaussians(5);
    let centers: Vec<Vec<f64>> = (0..6).map(|i| data.row(i * 3).to_vec()).collect();
    let r = run_kmeans(&data, &cfg(6, Variant::Lloyd), &centers).unwrap();
    let (assign, means) = naive_lloyd(&data, &centers, 1000);
    assert_eq!(labels(&r), assign);
    assert_eq!(r.means, means);
    assert_eq!(r.distance_computations, (200 * 6 * r.iterations) as u64);
}

#[test]
fn parallel_lloyd_is_sequential_lloyd() {
    let data = three_gaussians(9);
    let centers: Vec<Vec<f64>> = (0..5).map(|i| data.row(i).to_vec()).collect();
    let a = run_kmeans(&data, &cfg(5, Variant::Lloyd), &centers).unwrap();
    let b = run_kmeans(&data, &cfg(5, Variant::Lloyd).execution(Execution::Parallel), &centers).unwrap();
    assert_eq!(a, b);
}

#[test]
fn fit_uses_the_seeded_initializer() {
    let data = three_gaussians(1);
    let c = KMeansConfig::new(3, Variant::Hamerly).seed(4);
    assert_eq!(fit(&data, &c).unwrap(), fit(&data, &c).unwrap());
    let first = fit(&data, &c.clone().init(InitStrategy::FirstK)).unwrap();
    let direct = run_kmeans(&data, &c, &[data.row(0).to_vec(), data.row(1).to_vec(), data.row(2).to_vec()]).unwrap();
    assert_eq!(first, direct);
}

#[test]
fn variant_names_round_trip() {
    for v in Variant::EXACT.into_iter().chain([Variant::MacQueen, Variant::MinusMinus { rate: 0.1 }]) {
        assert_eq!(Variant::parse(v.name(), 0.1).unwrap(), v);
    }
    assert!(Variant::parse("minusminus", 0.0).is_err());
    assert!(Variant::parse("kmedians", 0.1).is_err());
}

/// Small integer grids produce many exact distance ties.
fn grid_data() -> impl Strategy<Value = (Dataset, Vec<Vec<f64>>)> {
    (prop::collection::vec((0i8..8, 0i8..8), 8..60), 2usize..7).prop_filter_map("need k distinct points", |(pts, k)| {
        let rows: Vec<[f64; 2]> = pts.iter().map(|&(a, b)| [a as f64, b as f64]).collect();
        let mut centers: Vec<Vec<f64>> = Vec::new();
        for r in &rows {
            if centers.len() < k && !centers.iter().any(|c| c[..] == r[..]) {
                centers.push(r.to_vec());
            }
        }
        (centers.len() == k).then(|| (Dataset::from_rows(&rows).unwrap(), centers))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn accelerated_variants_track_lloyd_every_iteration((data, centers) in grid_data()) {
        let k = centers.len();
        let full = run_kmeans(&data, &cfg(k, Variant::Lloyd), &centers).unwrap();
        for t in 1..=full.iterations {
            let reference = run_kmeans(&data, &cfg(k, Variant::Lloyd).maxiter(t), &centers).unwrap();
            for v in Variant::EXACT {
                let r = run_kmeans(&data, &cfg(k, v).maxiter(t), &centers).unwrap();
                prop_assert_eq!(r.clustering.assignment(), reference.clustering.assignment(), "{} at {}", v.name(), t);
                prop_assert_eq!(&r.means, &reference.means, "{} at {}", v.name(), t);
                prop_assert_eq!(r.iterations, reference.iterations);
            }
        }
    }

    #[test]
    fn lloyd_sse_never_increases((data, centers) in grid_data()) {
        let k = centers.len();
        let full = run_kmeans(&data, &cfg(k, Variant::Lloyd), &centers).unwrap();
        let mut prev = f64::INFINITY;
        for t in 1..=full.iterations {
            let r = run_kmeans(&data, &cfg(k, Variant::Lloyd).maxiter(t), &centers).unwrap();
            prop_assert!(r.sse <= prev * (1.0 + 1e-12), "sse rose from {} to {}", prev, r.sse);
            prev = r.sse;
        }
        let (assign, means) = naive_lloyd(&data, &centers, 10_000);
        prop_assert_eq!(labels(&full), assign);
        prop_assert_eq!(full.means, means);
    }

    #[test]
    fn result_sse_matches_its_assignment((data, centers) in grid_data()) {
        let k = centers.len();
        for v in [Variant::Lloyd, Variant::MacQueen, Variant::MinusMinus { rate: 0.1 }] {
            let r = run_kmeans(&data, &cfg(k, v), &centers).unwrap();
            let sse: f64 = r.clustering.assignment().iter().enumerate()
                .filter(|(_, &a)| a >= 0)
                .map(|(i, &a)| squared_euclidean(data.row(i), &r.means[a as usize]))
                .sum();
            prop_assert!((sse - r.sse).abs() <= 1e-9 * (1.0 + sse));
        }
    }
}
