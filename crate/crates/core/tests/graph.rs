use std::path::Path;

use palms::graph::{
    density, er_generate, load_edge_list, partition_nodes, save_edge_list, AdjacencyMatrix, Directedness,
};
use palms::metrics::{srel, srnl};
use palms::seed;
use proptest::prelude::*;
use rand::seq::SliceRandom;

#[test]
fn er_mean_edge_count_matches_binomial() {
    let (n, p, seeds) = (50usize, 0.5, 500);
    let pairs = (n * (n - 1) / 2) as f64;
    let counts: Vec<f64> = (0..seeds)
        .map(|s| er_generate(n, p, s).unwrap().edge_count() as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / seeds as f64;
    let se = (pairs * p * (1.0 - p) / seeds as f64).sqrt();
    assert!((mean - 612.5).abs() <= 3.0 * se, "mean {mean}, se {se}");
}

#[test]
fn er_pair_frequencies_within_five_sigma() {
    let (n, p, seeds) = (30usize, 0.3, 1000u64);
    let mut freq = vec![0u32; n * n];
    for s in 0..seeds {
        let a = er_generate(n, p, s).unwrap();
        for (i, j) in a.edges() {
            freq[i * n + j] += 1;
        }
    }
    let sd = (seeds as f64 * p * (1.0 - p)).sqrt();
    for i in 0..n {
        for j in (i + 1)..n {
            let dev = (freq[i * n + j] as f64 - seeds as f64 * p).abs();
            assert!(dev <= 5.0 * sd, "pair ({i},{j}) count {}", freq[i * n + j]);
        }
    }
}

#[test]
fn bundled_social_sample_loads() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/social_500.txt");
    let el = load_edge_list(&path, Directedness::Undirected).unwrap();
    assert_eq!(el.adjacency.n_nodes(), 500);
    assert_eq!(el.adjacency.edge_count(), 1117);
    assert_eq!(el.self_loops, 0);
    assert!(el.node_ids.windows(2).all(|w| w[0] < w[1]));
    let d = density(&el.adjacency);
    assert!((d - 1117.0 / 124_750.0).abs() < 1e-15);
}

proptest! {
    #[test]
    fn edge_list_round_trip(n in 2usize..40, p in 0.0f64..1.0, s in any::<u64>(), directed in any::<bool>()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        let und = er_generate(n, p, s).unwrap();
        let a = if directed {
            AdjacencyMatrix::from_edges(n, Directedness::Directed, und.edges().into_iter().map(|(i, j)| (j, i))).unwrap()
        } else {
            und
        };
        save_edge_list(&path, &a).unwrap();
        let back = load_edge_list(&path, a.directedness()).unwrap();
        prop_assert_eq!(back.adjacency, a);
    }

    #[test]
    fn partitions_are_reproducible(n in 1usize..200, k in 1usize..20, s in any::<u64>(), split in any::<u64>()) {
        prop_assume!(k <= n);
        let a = partition_nodes(n, k, s, split).unwrap();
        let b = partition_nodes(n, k, s, split).unwrap();
        prop_assert_eq!(&a, &b);
        let sizes: Vec<usize> = a.groups().iter().map(Vec::len).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        prop_assert_eq!(sizes.iter().sum::<usize>(), n);
    }

    #[test]
    fn success_rates_ignore_relabelling(n in 3usize..25, p in 0.05f64..0.95, s in any::<u64>()) {
        let truth = er_generate(n, p, s).unwrap();
        let est = er_generate(n, p, s ^ 1).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut seed::rng(s));
        let (tp, ep) = (truth.permuted(&perm).unwrap(), est.permuted(&perm).unwrap());
        prop_assert_eq!(srnl(&truth, &est).ok(), srnl(&tp, &ep).ok());
        prop_assert_eq!(srel(&truth, &est).ok(), srel(&tp, &ep).ok());
    }
}
