//! Discretised Kuramoto oscillators without natural frequencies.

use std::f64::consts::TAU;

use rand::Rng as _;

use super::dataset::{DatasetMeta, DynamicsDataset, ModelTag};
use super::{check_rounds, hadamard_row_sums, neighbor_lists, NoiseSpec};
use crate::error::{Error, Result};
use crate::graph::AdjacencyMatrix;
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KuramotoConfig {
    /// Euler step `h`.
    pub step: f64,
    /// Coupling strength `c`.
    pub coupling: f64,
    pub init_phase_seed: u64,
}

impl Default for KuramotoConfig {
    fn default() -> Self {
        KuramotoConfig {
            step: 0.01,
            coupling: 200.0,
            init_phase_seed: 0,
        }
    }
}

impl KuramotoConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::param(format!("kuramoto step must be > 0, got {}", self.step)));
        }
        if !self.coupling.is_finite() {
            return Err(Error::param("kuramoto coupling must be finite"));
        }
        Ok(())
    }
}

/// `Ψ^t(i, j) = c·sin(θ_j − θ_i)`, `Y^t = (A∘Ψ^t)·1 + ε^t`, and
/// `θ^{t+1} = θ^t + h·(A∘Ψ^t)·1` using the noiseless drift.
pub fn simulate_kuramoto(
    a: &AdjacencyMatrix,
    n_rounds: usize,
    cfg: KuramotoConfig,
    noise: NoiseSpec,
) -> Result<DynamicsDataset> {
    let mut rng = seed::rng_for(cfg.init_phase_seed, &[0x7E7A]);
    let phases: Vec<f64> = (0..a.n_nodes()).map(|_| rng.random::<f64>() * TAU).collect();
    simulate_kuramoto_from(a, phases, n_rounds, cfg, noise)
}

pub(crate) fn simulate_kuramoto_from(
    a: &AdjacencyMatrix,
    mut theta: Vec<f64>,
    n_rounds: usize,
    cfg: KuramotoConfig,
    noise: NoiseSpec,
) -> Result<DynamicsDataset> {
    check_rounds(n_rounds)?;
    cfg.validate()?;
    noise.validate()?;
    let n = a.n_nodes();
    debug_assert_eq!(theta.len(), n);
    let neighbors = neighbor_lists(a);
    let eps = noise.draw(n_rounds, n);
    let mut interaction = vec![0.0; n_rounds * n * n];
    let mut response = vec![0.0; n_rounds * n];

    for t in 0..n_rounds {
        let psi = &mut interaction[t * n * n..(t + 1) * n * n];
        for i in 0..n {
            for j in 0..n {
                if j != i {
                    psi[i * n + j] = cfg.coupling * (theta[j] - theta[i]).sin();
                }
            }
        }
        let drift = hadamard_row_sums(a, psi, &neighbors);
        for i in 0..n {
            response[t * n + i] = drift[i] + eps[t * n + i];
            theta[i] += cfg.step * drift[i];
        }
    }

    let meta = DatasetMeta {
        model: ModelTag::Kuramoto,
        seed: cfg.init_phase_seed,
        noise_std: noise.std_dev,
        noise_seed: noise.seed,
        coupling: Some(cfg.coupling),
        step: Some(cfg.step),
    };
    DynamicsDataset::new(n, n_rounds, interaction, response, Some(eps), meta)
}
