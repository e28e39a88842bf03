use super::*;
use crate::kmeans::Variant;
use crate::kmedoids::SwapAlgorithm;
use crate::linkage::LinkageScheme;
use crate::metric::Metric;
use crate::par::Execution;
use proptest::prelude::*;

fn params(pairs: &[(&str, &str)]) -> ParamSet {
    ParamSet::from_pairs(pairs.iter().copied()).unwrap()
}

fn line_of(e: Error) -> usize {
    match e {
        Error::Parse { line, .. } => line,
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn points_with_labels() {
    let d = parse_points_str("1 2 3 Example1\n4 5 6 Example2").unwrap();
    assert_eq!((d.len(), d.dim()), (2, 3));
    assert_eq!(d.row(1), &[4.0, 5.0, 6.0]);
    assert_eq!(d.label(0), Some("Example1"));
    let mixed = parse_points_str("# comment\n\n1.5 -2e3 a b\n  0 0\n").unwrap();
    assert_eq!(mixed.label(0), Some("a b"));
    assert_eq!(mixed.label(1), None);
}

#[test]
fn point_errors() {
    let e = parse_points_str("# header only").unwrap_err();
    assert!(e.to_string().contains("no data rows"), "{e}");
    assert_eq!(line_of(parse_points_str("1 2\n3 4 5").unwrap_err()), 2);
    assert_eq!(line_of(parse_points_str("1 2\n#x\nlabel").unwrap_err()), 3);
    assert_eq!(line_of(parse_points_str("1 foo 2").unwrap_err()), 1);
    // non-finite tokens are labels, never coordinates
    let d = parse_points_str("1 NaN\n2 inf").unwrap();
    assert_eq!(d.dim(), 1);
    assert_eq!(d.label(0), Some("NaN"));
}

#[test]
fn assignment_lines() {
    let c = Clustering::new(vec![0, 0, 1, 1, 0]).unwrap();
    assert_eq!(write_assignment(&c, Some("First")).unwrap(), "0 0 1 1 0 First\n");
    let noisy = Clustering::new(vec![0, 0, 1, 1, -1]).unwrap();
    assert_eq!(write_assignment(&noisy, None).unwrap(), "0 0 1 1 -1\n");
    assert!(write_assignment(&Clustering::new(vec![]).unwrap_or_else(|_| Clustering::from_components::<u8>([])), None).is_err());
    let (back, label) = parse_assignment("0 0 1 1 -7 k=3").unwrap();
    assert_eq!(back.assignment(), &[0, 0, 1, 1, -1]);
    assert_eq!(label.as_deref(), Some("k=3"));
    let all = parse_assignments("# eval sse 1\n0 1\n\n1 0 x\n").unwrap();
    assert_eq!(all.len(), 2);
    assert!(parse_assignment("k=2").is_err());
}

#[test]
fn ranges() {
    assert_eq!(parse_int_range("1,2,..,10").unwrap().values(), (1..=10).collect::<Vec<_>>().as_slice());
    let full = parse_int_range("1,2,..,10,20,..,100,200,..,1000").unwrap();
    let expected: Vec<usize> = (1..=10).chain((20..=100).step_by(10)).chain((200..=1000).step_by(100)).collect();
    assert_eq!(full.values(), expected.as_slice());
    assert_eq!(full.len(), 28);
    assert_eq!(parse_int_range("5").unwrap().values(), &[5]);
    assert_eq!(parse_int_range("2, 4, 8").unwrap().values(), &[2, 4, 8]);
    assert_eq!(parse_int_range("1,2,..,4,4").unwrap().values(), &[1, 2, 3, 4]);
    for bad in ["", "3,2", "1,..,5", "..,5", "1,2,..", "1,2,..,..,9", "1,3,..,6", "0,1", "1,x", "2,2,..,4"] {
        assert!(parse_int_range(bad).is_err(), "{bad:?} should be rejected");
    }
}

#[test]
fn keys_are_validated() {
    let mut p = ParamSet::new();
    assert!(p.push("kmeans.k", "3").is_ok());
    assert!(p.push("kmeans.init_2", "3").is_ok());
    for bad in ["Kmeans.k", "kmeans..k", "", ".k", "k-means", "kmeans.2k"] {
        assert!(p.push(bad, "1").is_err(), "{bad:?}");
    }
    assert!(p.push_assignment("seed=4").is_ok());
    assert!(p.push_assignment("seed").is_err());
}

#[test]
fn kmeans_description_with_defaults() {
    let d = build_algorithm(&params(&[("algorithm", "kmeans"), ("kmeans.k", "10"), ("kmeans.variant", "sort")])).unwrap();
    assert_eq!(d.seed, 0);
    assert_eq!(
        d.algorithm,
        Algorithm::KMeans { ks: vec![10], variant: Variant::Sort, maxiter: 0, init: crate::init::InitStrategy::KMeansPlusPlus }
    );
}

#[test]
fn agnes_defaults_to_ward_on_squared_distances() {
    let d = build_algorithm(&params(&[("algorithm", "agnes")])).unwrap();
    assert_eq!(
        d.algorithm,
        Algorithm::Hierarchical {
            engine: HacEngine::Agnes,
            linkage: Some(LinkageScheme::Ward),
            metric: Metric::SquaredEuclidean,
            extraction: None
        }
    );
    let single = build_algorithm(&params(&[("algorithm", "anderberg"), ("hac.linkage", "single")])).unwrap();
    assert!(matches!(single.algorithm, Algorithm::Hierarchical { metric: Metric::Euclidean, .. }));
}

#[test]
fn configuration_errors() {
    let cases: &[(&[(&str, &str)], &str)] = &[
        (&[("algorithm", "kmeans")], "missing kmeans.k"),
        (&[], "missing algorithm"),
        (&[("algorithm", "dbscan")], "unknown algorithm"),
        (&[("algorithm", "kmeans"), ("kmeans.k", "2"), ("kmeans.kk", "2")], "valid keys: algorithm, seed, kmeans.k"),
        (&[("algorithm", "kmeans"), ("kmeans.k", "two")], "kmeans.k"),
        (&[("algorithm", "kmeans"), ("kmeans.k", "2"), ("kmeans.maxiter", "-1")], "kmeans.maxiter"),
        (&[("algorithm", "agnes"), ("hac.metric", "euclidean")], "expects squared_euclidean"),
        (&[("algorithm", "nnchain"), ("hac.linkage", "centroid")], "reducible"),
        (&[("algorithm", "slink"), ("hac.linkage", "complete")], "single linkage only"),
        (&[("algorithm", "agnes"), ("hac.k", "2"), ("hac.threshold", "1")], "not both"),
        (&[("algorithm", "agnes"), ("hac.minsize", "2")], "needs hac.k"),
        (&[("algorithm", "minimax"), ("hac.linkage", "single")], "unknown key"),
        (&[("algorithm", "kmedoids"), ("kmedoids.k", "2"), ("kmedoids.init", "normal_generated")], "data points"),
        (&[("algorithm", "kmeans"), ("kmeans.k", "2"), ("kmeans.rate", "0.1")], "minusminus"),
        (&[("algorithm", "kmeans"), ("kmeans.k", "3"), ("kmeans.centers", "0,0;1,1")], "does not match"),
        (&[("algorithm", "kmeans"), ("kmeans.centers", "0,0;1,1"), ("kmeans.init", "first_k")], "mutually exclusive"),
        (&[("algorithm", "seed")], "unknown algorithm"),
    ];
    for (pairs, needle) in cases {
        let err = build_algorithm(&params(pairs)).unwrap_err().to_string();
        assert!(err.contains(needle), "{pairs:?}: '{err}' lacks '{needle}'");
    }
}

#[test]
fn other_algorithms_resolve() {
    let d = build_algorithm(&params(&[("algorithm", "kmedoids"), ("kmedoids.k", "2,3")])).unwrap();
    assert!(matches!(d.algorithm, Algorithm::KMedoids { algo: MedoidAlgorithm::Swap(SwapAlgorithm::FastPam { tolerance }), .. } if tolerance == 1.0));
    assert_eq!(d.ks(), &[2, 3]);
    let d = build_algorithm(&params(&[("algorithm", "clarans"), ("clarans.k", "4"), ("clarans.maxneighbor", "0.5")])).unwrap();
    assert!(matches!(d.algorithm, Algorithm::Clarans { ref config, .. } if config.maxneighbor == crate::kmedoids::MaxNeighbor::Fraction(0.5)));
    let d = build_algorithm(&params(&[("algorithm", "clara"), ("clara.k", "4"), ("clara.fast", "true"), ("seed", "9")])).unwrap();
    assert!(matches!(d.algorithm, Algorithm::Clara { ref config, .. } if config.fast));
    assert_eq!(d.seed, 9);
    let d = build_algorithm(&params(&[("algorithm", "minimax"), ("hac.k", "3")])).unwrap();
    assert!(matches!(d.algorithm, Algorithm::Hierarchical { engine: HacEngine::MiniMax(_), linkage: None, metric: Metric::Euclidean, .. }));
    let d = build_algorithm(&params(&[("algorithm", "kmeans"), ("kmeans.centers", "0,0;4,0")])).unwrap();
    assert!(matches!(d.algorithm, Algorithm::KMeans { ref ks, init: crate::init::InitStrategy::Predefined(_), .. } if ks == &[2]));
}

#[test]
fn last_duplicate_wins() {
    let d = build_algorithm(&params(&[("algorithm", "kmeans"), ("kmeans.k", "2"), ("kmeans.k", "5")])).unwrap();
    assert_eq!(d.ks(), &[5]);
}

fn d2() -> Dataset {
    Dataset::from_rows(&[[0.0, 0.0], [0.0, 1.0], [4.0, 0.0], [4.0, 1.0]]).unwrap()
}

#[test]
fn execute_small_runs() {
    let data = d2();
    let run = |pairs: &[(&str, &str)]| execute(&build_algorithm(&params(pairs)).unwrap(), &data, Execution::Sequential);
    let hac = run(&[("algorithm", "agnes"), ("hac.k", "2")]).unwrap();
    assert_eq!(hac[0].clustering.assignment(), &[0, 0, 1, 1]);
    assert_eq!(hac[0].label(), None);
    let sweep = run(&[("algorithm", "slink"), ("hac.k", "1,2,..,4")]).unwrap();
    assert_eq!(sweep.len(), 4);
    assert_eq!(sweep[3].label().as_deref(), Some("k=4"));
    let cut = run(&[("algorithm", "minimax"), ("hac.threshold", "1")]).unwrap();
    assert_eq!(cut[0].clustering.num_clusters(), 2);
    assert!(run(&[("algorithm", "agnes")]).is_err());
    let km = run(&[("algorithm", "kmeans"), ("kmeans.centers", "0,0;4,0")]).unwrap();
    assert_eq!(km[0].clustering.assignment(), &[0, 0, 1, 1]);
    for algo in ["kmedoids", "clara", "clarans"] {
        let key = format!("{algo}.k");
        let out = run(&[("algorithm", algo), (key.as_str(), "2")]).unwrap();
        let a = out[0].clustering.assignment();
        assert!(a[0] == a[1] && a[2] == a[3] && a[0] != a[2], "{algo}: {a:?}");
    }
    assert!(run(&[("algorithm", "kmeans"), ("kmeans.k", "5")]).is_err());
}

#[test]
fn a_k_runs_the_same_alone_or_in_a_sweep() {
    let data = crate::synth::three_gaussians(6);
    for (algo, key) in [("kmeans", "kmeans.k"), ("clarans", "clarans.k"), ("kmedoids", "kmedoids.k")] {
        let single = build_algorithm(&params(&[("algorithm", algo), (key, "4"), ("seed", "3")])).unwrap();
        let sweep = build_algorithm(&params(&[("algorithm", algo), (key, "2,3,4,5"), ("seed", "3")])).unwrap();
        let a = execute(&single, &data, Execution::Sequential).unwrap();
        let b = execute(&sweep, &data, Execution::Parallel).unwrap();
        assert_eq!(a[0].clustering, b[2].clustering, "{algo}");
        assert_eq!(b[2].k, Some(4));
    }
}

#[test]
fn evaluation_names() {
    for m in EvalMeasure::ALL {
        assert_eq!(EvalMeasure::parse(m.name()).unwrap(), m);
    }
    assert!(EvalMeasure::parse("ari").is_err());
    let c = Clustering::new(vec![0, 0, 1, 1]).unwrap();
    assert_eq!(evaluate(EvalMeasure::Sse, &d2(), &c, Execution::Sequential), 1.0);
    let one = Clustering::new(vec![0, 0, 0, 0]).unwrap();
    assert!(evaluate(EvalMeasure::Silhouette, &d2(), &one, Execution::Sequential).is_nan());
}

proptest! {
    #[test]
    fn assignment_round_trip(labels in prop::collection::vec(-1i32..6, 1..50), label in proptest::option::of("[a-z][a-z0-9=]{0,8}")) {
        let c = Clustering::from_components(labels.iter().map(|&l| (l >= 0).then_some(l)));
        let line = write_assignment(&c, label.as_deref()).unwrap();
        let (back, back_label) = parse_assignment(&line).unwrap();
        prop_assert_eq!(back.assignment(), c.assignment());
        prop_assert_eq!(back_label, label);
    }

    #[test]
    fn points_round_trip(rows in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 3), 1..20)) {
        let text: String = rows.iter().map(|r| format!("{} {} {} p\n", r[0], r[1], r[2])).collect();
        let d = parse_points_str(&text).unwrap();
        for (i, r) in rows.iter().enumerate() {
            prop_assert_eq!(d.row(i), r.as_slice());
        }
    }

    #[test]
    fn build_is_pure(k in 1usize..20, seed in any::<u64>(), variant in prop::sample::select(vec!["lloyd", "elkan", "hamerly", "exponion"])) {
        let p = params(&[("algorithm", "kmeans"), ("kmeans.k", &k.to_string()), ("seed", &seed.to_string()), ("kmeans.variant", variant)]);
        prop_assert_eq!(build_algorithm(&p).unwrap(), build_algorithm(&p.clone()).unwrap());
    }
}
