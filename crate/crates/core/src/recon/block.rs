use std::time::Instant;

use crate::dynamics::{build_design, DynamicsDataset};
use crate::error::{Error, Result};
use crate::solver::{
    adaptive_weights, per_unit_weight, pilot_estimate, select_lambda, solve_block, Penalty, SolverConfig, WeightVector,
};

use super::Tuning;

/// One sub-network estimation job: rows of group `row_group` regressed on
/// the columns of group `col_group` within split `split_id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockTask {
    pub split_id: u64,
    pub row_group: usize,
    pub col_group: usize,
    pub row_nodes: Vec<usize>,
    pub col_nodes: Vec<usize>,
    pub task_seed: u64,
}

/// Scores of one block, `row_nodes.len() × col_nodes.len()` row-major.
/// Entries pairing a node with itself stay 0.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockScores {
    pub values: Vec<f64>,
    /// Residual sum of squares of each row regression.
    pub residual_ss: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub elapsed_s: f64,
    pub all_converged: bool,
}

fn tag(task: &BlockTask, node: usize) -> impl FnOnce(Error) -> Error + '_ {
    move |e| Error::Block {
        split: task.split_id as usize,
        row_group: task.row_group,
        col_group: task.col_group,
        node,
        source: Box::new(e),
    }
}

/// Estimate the block's coefficients, one penalised regression per row node.
///
/// λ and `lambda2` are taken relative to each regression's mean column
/// energy (see [`Tuning`]); λ is further divided by the smallest adaptive weight.
pub fn estimate_block(d: &DynamicsDataset, task: &BlockTask, solver: &SolverConfig, tuning: &Tuning) -> Result<BlockScores> {
    if task.row_nodes.is_empty() || task.col_nodes.is_empty() {
        return Err(Error::param("block task has an empty node set"));
    }
    let start = Instant::now();
    let n_cols = task.col_nodes.len();
    let mut values = vec![0.0; task.row_nodes.len() * n_cols];
    let mut residual_ss = Vec::with_capacity(task.row_nodes.len());
    let mut lambdas = Vec::with_capacity(task.row_nodes.len());
    let mut all_converged = true;

    for (ri, &node) in task.row_nodes.iter().enumerate() {
        if task.col_nodes.iter().all(|&j| j == node) {
            residual_ss.push(0.0);
            lambdas.push(0.0);
            continue;
        }
        let nd = build_design(d, node, &task.col_nodes).map_err(tag(task, node))?;
        let p = nd.columns.len();
        let scale = (0..p)
            .map(|j| {
                let mut s = 0.0;
                for t in 0..nd.design.rows() {
                    let x = nd.design.get(t, j);
                    s += x * x;
                }
                s
            })
            .sum::<f64>()
            / p as f64;

        let lambda = if !(scale > 0.0) {
            0.0
        } else {
            match tuning {
                Tuning::Fixed(rel) => rel * scale,
                Tuning::CrossValidated(rel_grid) => {
                    let grid: Vec<f64> = rel_grid.iter().map(|g| g * scale).collect();
                    select_lambda(&nd.design, &nd.response, &solver_scaled(solver, scale), &grid)
                        .map_err(tag(task, node))?
                }
            }
        };
        let weights = match solver.penalty {
            Penalty::Alms => {
                let pilot = pilot_estimate(&nd.design, &nd.response).map_err(tag(task, node))?;
                adaptive_weights(&pilot, solver.weight_gamma).map_err(tag(task, node))?
            }
            Penalty::Lasso | Penalty::SignalLasso => WeightVector::uniform(p),
        };
        let cfg = SolverConfig {
            lambda: per_unit_weight(lambda, &weights),
            ..solver_scaled(solver, scale)
        };
        let est = solve_block(&nd.design, &nd.response, &cfg, &weights).map_err(tag(task, node))?;
        all_converged &= est.converged;
        residual_ss.push(est.residuals.iter().map(|e| e * e).sum());
        lambdas.push(lambda);

        let row = &mut values[ri * n_cols..(ri + 1) * n_cols];
        let mut coef = est.coefficients.iter();
        for (slot, &j) in row.iter_mut().zip(&task.col_nodes) {
            if j != node {
                *slot = *coef.next().expect("one coefficient per non-self column");
            }
        }
    }
    Ok(BlockScores {
        values,
        residual_ss,
        lambdas,
        elapsed_s: start.elapsed().as_secs_f64(),
        all_converged,
    })
}

fn solver_scaled(solver: &SolverConfig, scale: f64) -> SolverConfig {
    SolverConfig {
        lambda2: solver.lambda2 * scale,
        ..solver.clone()
    }
}
