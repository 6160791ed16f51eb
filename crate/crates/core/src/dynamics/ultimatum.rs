//! Evolutionary ultimatum game on a network.
//!
//! Every edge plays a balanced game each round: each endpoint proposes once
//! and responds once. A node's income is the sum of its per-edge payoffs;
//! afterwards every node compares itself with one random neighbour and may
//! imitate it under the Fermi rule.

use rand::Rng as _;

use super::dataset::{DatasetMeta, DynamicsDataset, ModelTag};
use super::{check_rounds, hadamard_row_sums, neighbor_lists, NoiseSpec};
use crate::error::{Error, Result};
use crate::graph::AdjacencyMatrix;
use crate::seed;

/// Per-node offers `p_i` and acceptance thresholds `r_i`, all in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategyProfile {
    pub offers: Vec<f64>,
    pub thresholds: Vec<f64>,
}

impl StrategyProfile {
    pub fn new(offers: Vec<f64>, thresholds: Vec<f64>) -> Result<Self> {
        if offers.len() != thresholds.len() {
            return Err(Error::DimensionMismatch {
                expected: offers.len(),
                got: thresholds.len(),
            });
        }
        if offers.iter().chain(&thresholds).any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::param("strategy entries must lie in [0, 1]"));
        }
        Ok(StrategyProfile { offers, thresholds })
    }

    /// I.i.d. standard-uniform offers and thresholds.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = seed::rng_for(seed, &[0x57A7]);
        let mut offers = Vec::with_capacity(n);
        let mut thresholds = Vec::with_capacity(n);
        for _ in 0..n {
            offers.push(rng.random::<f64>());
            thresholds.push(rng.random::<f64>());
        }
        StrategyProfile { offers, thresholds }
    }

    pub fn len(&self) -> usize {
        self.offers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offers.is_empty()
    }
}

#[inline]
fn payoff(p_i: f64, r_i: f64, p_j: f64, r_j: f64) -> f64 {
    let mine_accepted = p_i >= r_j;
    let theirs_accepted = p_j >= r_i;
    match (mine_accepted, theirs_accepted) {
        (true, true) => p_j + 1.0 - p_i,
        (true, false) => 1.0 - p_i,
        (false, true) => p_j,
        (false, false) => 0.0,
    }
}

/// Payoffs `(P_ij, P_ji)` of one balanced game between `i` and `j`.
///
/// An offer is accepted when it meets the responder's threshold (`>=`).
pub fn payoff_pair(p_i: f64, r_i: f64, p_j: f64, r_j: f64) -> Result<(f64, f64)> {
    if [p_i, r_i, p_j, r_j].iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::param("payoff inputs must lie in [0, 1]"));
    }
    Ok((payoff(p_i, r_i, p_j, r_j), payoff(p_j, r_j, p_i, r_i)))
}

/// Probability that a node with income `y_i` imitates a neighbour with
/// income `y_j`: `1 / (1 + exp((y_i − y_j)/N))`.
pub fn fermi_prob(y_i: f64, y_j: f64, n_nodes: usize) -> f64 {
    let arg = ((y_i - y_j) / n_nodes.max(1) as f64).clamp(-700.0, 700.0);
    1.0 / (1.0 + arg.exp())
}

pub fn simulate_ultimatum(
    a: &AdjacencyMatrix,
    n_rounds: usize,
    noise: NoiseSpec,
    seed: u64,
) -> Result<DynamicsDataset> {
    let profile = StrategyProfile::random(a.n_nodes(), seed);
    simulate_ultimatum_from(a, profile, n_rounds, noise, seed)
}

/// Run the game from a given initial strategy profile.
///
/// Imitation decisions use the noiseless incomes of the round; updates are
/// synchronous.
pub fn simulate_ultimatum_from(
    a: &AdjacencyMatrix,
    mut profile: StrategyProfile,
    n_rounds: usize,
    noise: NoiseSpec,
    seed: u64,
) -> Result<DynamicsDataset> {
    check_rounds(n_rounds)?;
    noise.validate()?;
    let n = a.n_nodes();
    if profile.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: profile.len(),
        });
    }
    let neighbors = neighbor_lists(a);
    let eps = noise.draw(n_rounds, n);
    let mut imitation = seed::rng_for(seed, &[0x1417]);
    let mut interaction = vec![0.0; n_rounds * n * n];
    let mut response = vec![0.0; n_rounds * n];

    for t in 0..n_rounds {
        let psi = &mut interaction[t * n * n..(t + 1) * n * n];
        for i in 0..n {
            let (p_i, r_i) = (profile.offers[i], profile.thresholds[i]);
            for j in 0..n {
                if j != i {
                    psi[i * n + j] = payoff(p_i, r_i, profile.offers[j], profile.thresholds[j]);
                }
            }
        }
        let income = hadamard_row_sums(a, psi, &neighbors);
        for i in 0..n {
            response[t * n + i] = income[i] + eps[t * n + i];
        }

        let mut next = profile.clone();
        for (i, nb) in neighbors.iter().enumerate() {
            if nb.is_empty() {
                continue;
            }
            let j = nb[imitation.random_range(0..nb.len())];
            let u: f64 = imitation.random();
            if u < fermi_prob(income[i], income[j], n) {
                next.offers[i] = profile.offers[j];
                next.thresholds[i] = profile.thresholds[j];
            }
        }
        profile = next;
    }

    let meta = DatasetMeta {
        model: ModelTag::Ultimatum,
        seed,
        noise_std: noise.std_dev,
        noise_seed: noise.seed,
        coupling: None,
        step: None,
    };
    DynamicsDataset::new(n, n_rounds, interaction, response, Some(eps), meta)
}
