//! Simulators for the three data-generating processes and the general model
//! `Y^t = (A ∘ Ψ^t)·1 + ε^t`.

mod dataset;
mod design;
mod gaussian;
mod kuramoto;
mod ultimatum;

use rand_distr::{Distribution, StandardNormal};

pub use dataset::{DatasetMeta, DynamicsDataset, ModelTag};
pub use design::{build_design, NodeDesign};
pub use gaussian::simulate_gaussian;
pub use kuramoto::{simulate_kuramoto, KuramotoConfig};
pub use ultimatum::{fermi_prob, payoff_pair, simulate_ultimatum, simulate_ultimatum_from, StrategyProfile};

use crate::error::{Error, Result};
use crate::graph::AdjacencyMatrix;
use crate::seed;

/// Observation noise added to every response entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    pub std_dev: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(std_dev: f64, seed: u64) -> Result<Self> {
        let spec = NoiseSpec { std_dev, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn none() -> Self {
        NoiseSpec { std_dev: 0.0, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.std_dev >= 0.0 && self.std_dev.is_finite()) {
            return Err(Error::param(format!(
                "noise std must be finite and >= 0, got {}",
                self.std_dev
            )));
        }
        Ok(())
    }

    /// Noise for all rounds, row-major `rounds × n`.
    pub(crate) fn draw(&self, rounds: usize, n: usize) -> Vec<f64> {
        if self.std_dev == 0.0 {
            return vec![0.0; rounds * n];
        }
        let mut rng = seed::rng_for(self.seed, &[0x0153]);
        (0..rounds * n)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                self.std_dev * z
            })
            .collect()
    }
}

/// `(A ∘ Ψ)·1`: for each node, the sum of `Ψ(i, j)` over its out-neighbours
/// in increasing `j`. All simulators and the consistency check share this
/// evaluation order.
pub fn hadamard_row_sums(a: &AdjacencyMatrix, psi: &[f64], neighbors: &[Vec<usize>]) -> Vec<f64> {
    let n = a.n_nodes();
    neighbors
        .iter()
        .enumerate()
        .map(|(i, nb)| nb.iter().map(|&j| psi[i * n + j]).sum())
        .collect()
}

pub(crate) fn neighbor_lists(a: &AdjacencyMatrix) -> Vec<Vec<usize>> {
    (0..a.n_nodes()).map(|i| a.neighbors(i)).collect()
}

pub(crate) fn check_rounds(n_rounds: usize) -> Result<()> {
    if n_rounds == 0 {
        return Err(Error::param("at least one round of dynamics is required"));
    }
    Ok(())
}

/// Largest `|Y^t − (A∘Ψ^t)·1 − ε^t|` over all rounds and nodes.
///
/// Requires the dataset to carry its noise draws.
pub fn model_residual(d: &DynamicsDataset, a: &AdjacencyMatrix) -> Result<f64> {
    let noise = d
        .noise()
        .ok_or_else(|| Error::data("dataset does not carry its noise draws"))?;
    let n = d.n_nodes();
    if a.n_nodes() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.n_nodes(),
        });
    }
    let neighbors = neighbor_lists(a);
    let mut worst = 0.0f64;
    for t in 0..d.n_rounds() {
        let drift = hadamard_row_sums(a, d.psi(t), &neighbors);
        for i in 0..n {
            let r = d.y(t)[i] - (drift[i] + noise[t * n + i]);
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}
