//! Independent Gaussian interactions with pair-specific mean and variance.

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use super::dataset::{DatasetMeta, DynamicsDataset, ModelTag};
use super::{check_rounds, hadamard_row_sums, neighbor_lists, NoiseSpec};
use crate::error::Result;
use crate::graph::AdjacencyMatrix;
use crate::seed;

/// Per ordered pair: mean ~ U(−1, 1), variance ~ U(1, 3). Diagonal left at 0.
fn pair_moments(n: usize, rng: &mut seed::Rng) -> (Vec<f64>, Vec<f64>) {
    let mut means = vec![0.0; n * n];
    let mut variances = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                means[i * n + j] = rng.random_range(-1.0..1.0);
                variances[i * n + j] = rng.random_range(1.0..3.0);
            }
        }
    }
    (means, variances)
}

pub fn simulate_gaussian(
    a: &AdjacencyMatrix,
    n_rounds: usize,
    noise: NoiseSpec,
    seed: u64,
) -> Result<DynamicsDataset> {
    check_rounds(n_rounds)?;
    noise.validate()?;
    let n = a.n_nodes();
    let mut rng = seed::rng_for(seed, &[0x6A55]);
    let (means, variances) = pair_moments(n, &mut rng);
    let sds: Vec<f64> = variances.iter().map(|v| v.sqrt()).collect();
    let neighbors = neighbor_lists(a);
    let eps = noise.draw(n_rounds, n);
    let mut interaction = vec![0.0; n_rounds * n * n];
    let mut response = vec![0.0; n_rounds * n];

    for t in 0..n_rounds {
        let psi = &mut interaction[t * n * n..(t + 1) * n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    psi[i * n + j] = means[i * n + j] + sds[i * n + j] * z;
                }
            }
        }
        let drift = hadamard_row_sums(a, psi, &neighbors);
        for i in 0..n {
            response[t * n + i] = drift[i] + eps[t * n + i];
        }
    }

    let meta = DatasetMeta {
        model: ModelTag::Gaussian,
        seed,
        noise_std: noise.std_dev,
        noise_seed: noise.seed,
        coupling: None,
        step: None,
    };
    DynamicsDataset::new(n, n_rounds, interaction, response, Some(eps), meta)
}
