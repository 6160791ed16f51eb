use nalgebra::{DMatrix, DVector};
use palms::bench::simulate;
use palms::dynamics::{
    build_design, model_residual, simulate_gaussian, simulate_kuramoto, simulate_ultimatum, DynamicsDataset,
    KuramotoConfig, ModelTag, NoiseSpec,
};
use palms::graph::{er_generate, AdjacencyMatrix, Directedness};

fn ols(x: &DMatrix<f64>, y: &DVector<f64>) -> DVector<f64> {
    (x.transpose() * x).lu().solve(&(x.transpose() * y)).unwrap()
}

fn all_models(a: &AdjacencyMatrix, r: usize, noise: f64, seed: u64) -> Vec<DynamicsDataset> {
    [ModelTag::Gaussian, ModelTag::Ultimatum, ModelTag::Kuramoto]
        .into_iter()
        .map(|m| simulate(a, m, r, noise, &KuramotoConfig::default(), seed).unwrap())
        .collect()
}

#[test]
fn every_simulator_is_exactly_self_consistent() {
    for s in 0..5 {
        let a = er_generate(30, 0.3, s).unwrap();
        for d in all_models(&a, 8, 1.0, s) {
            assert_eq!(model_residual(&d, &a).unwrap(), 0.0, "{}", d.model());
            for t in 0..d.n_rounds() {
                assert!((0..30).all(|i| d.psi_at(t, i, i) == 0.0));
                assert!(d.psi(t).iter().chain(d.y(t)).all(|v| v.is_finite()));
            }
        }
    }
}

#[test]
fn simulators_are_deterministic() {
    let a = er_generate(20, 0.4, 1).unwrap();
    assert_eq!(all_models(&a, 6, 0.5, 9), all_models(&a, 6, 0.5, 9));
    assert_ne!(all_models(&a, 6, 0.5, 9), all_models(&a, 6, 0.5, 10));
}

#[test]
fn shorter_runs_are_prefixes_of_longer_ones() {
    let a = er_generate(25, 0.2, 4).unwrap();
    let short = all_models(&a, 3, 1.0, 7);
    let long = all_models(&a, 20, 1.0, 7);
    for (s, l) in short.iter().zip(&long) {
        assert_eq!(s, &l.truncated(3).unwrap());
    }
}

#[test]
fn design_entries_are_copied_exactly() {
    let a = er_generate(20, 0.5, 2).unwrap();
    let d = simulate_kuramoto(&a, 5, KuramotoConfig::default(), NoiseSpec::new(1.0, 3).unwrap()).unwrap();
    let cols: Vec<usize> = (5..15).collect();
    let nd = build_design(&d, 2, &cols).unwrap();
    assert_eq!((nd.design.rows(), nd.design.cols()), (5, 10));
    for t in 0..5 {
        assert_eq!(nd.response[t].to_bits(), d.y_at(t, 2).to_bits());
        for (c, &j) in nd.columns.iter().enumerate() {
            assert_eq!(nd.design.get(t, c).to_bits(), d.psi_at(t, 2, j).to_bits());
        }
    }
    let with_self = build_design(&d, 7, &cols).unwrap();
    assert_eq!(with_self.design.cols(), 9);
    assert!(!with_self.columns.contains(&7));
}

#[test]
fn least_squares_on_noiseless_design_recovers_rows() {
    let a = er_generate(12, 0.35, 8).unwrap();
    let data = simulate_gaussian(&a, 30, NoiseSpec::none(), 5).unwrap();
    let all: Vec<usize> = (0..12).collect();
    for node in 0..12 {
        let nd = build_design(&data, node, &all).unwrap();
        let x = DMatrix::from_row_slice(nd.design.rows(), nd.design.cols(), nd.design.as_slice());
        let beta = ols(&x, &DVector::from_column_slice(&nd.response));
        for (c, &j) in nd.columns.iter().enumerate() {
            let truth = if a.get(node, j) { 1.0 } else { 0.0 };
            assert!((beta[c] - truth).abs() < 1e-8, "node {node} col {j}: {}", beta[c]);
        }
    }
}

#[test]
fn single_edge_response_is_that_column() {
    let a = AdjacencyMatrix::from_edges(6, Directedness::Undirected, [(0, 3)]).unwrap();
    let data = simulate_ultimatum(&a, 12, NoiseSpec::none(), 2).unwrap();
    let nd = build_design(&data, 0, &[1, 2, 3, 4, 5]).unwrap();
    let j = nd.columns.iter().position(|&c| c == 3).unwrap();
    for t in 0..12 {
        assert_eq!(nd.response[t], nd.design.get(t, j));
    }
}

#[test]
fn dataset_directory_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = er_generate(15, 0.3, 3).unwrap();
    for (i, d) in all_models(&a, 4, 1.0, 11).into_iter().enumerate() {
        let p = dir.path().join(i.to_string());
        d.save(&p).unwrap();
        assert_eq!(DynamicsDataset::load(&p).unwrap(), d);
    }
}

#[test]
fn kuramoto_noiseless_symmetric_sums_vanish() {
    let a = er_generate(40, 0.3, 6).unwrap();
    let cfg = KuramotoConfig {
        init_phase_seed: 2,
        ..KuramotoConfig::default()
    };
    let d = simulate_kuramoto(&a, 10, cfg, NoiseSpec::none()).unwrap();
    for t in 0..10 {
        let scale: f64 = d.y(t).iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        assert!(d.y(t).iter().sum::<f64>().abs() <= 1e-9 * scale);
    }
}
