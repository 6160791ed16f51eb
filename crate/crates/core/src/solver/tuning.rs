use super::cd::{check_finite, Prepared};
use super::weights::{adaptive_weights, per_unit_weight, pilot_estimate};
use super::{Penalty, SolverConfig, WeightVector};
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};

/// Below this many rounds cross-validation gives way to BIC.
pub const MIN_CV_ROUNDS: usize = 5;
const N_FOLDS: usize = 5;

/// Contiguous round-wise folds: fold `f` holds rounds `t` with `⌊t·K/r⌋ = f`.
pub fn cv_folds(n_rounds: usize) -> Vec<Vec<usize>> {
    let mut folds = vec![Vec::new(); N_FOLDS];
    for t in 0..n_rounds {
        folds[t * N_FOLDS / n_rounds].push(t);
    }
    folds
}

fn weights_for(cfg: &SolverConfig, design: &Matrix, response: &[f64]) -> Result<WeightVector> {
    match cfg.penalty {
        Penalty::Alms => adaptive_weights(&pilot_estimate(design, response)?, cfg.weight_gamma),
        Penalty::Lasso | Penalty::SignalLasso => Ok(WeightVector::uniform(design.cols())),
    }
}

fn sq_error(design: &Matrix, response: &[f64], beta: &[f64]) -> f64 {
    (0..design.rows())
        .map(|t| {
            let e = response[t] - dot(design.row(t), beta);
            e * e
        })
        .sum()
}

/// Choose λ from `grid` (positive, ascending).
///
/// With at least five rounds: 5-fold cross-validation over whole rounds,
/// minimising held-out squared error. With fewer: BIC
/// `r·ln(RSS/r) + ln(r)·#{β_j ≠ 0}`. Ties go to the larger λ. Adaptive
/// weights (ALMS) are recomputed from each training fold, and each grid value
/// is applied per unit of the smallest weight.
pub fn select_lambda(design: &Matrix, response: &[f64], cfg: &SolverConfig, grid: &[f64]) -> Result<f64> {
    check_finite(design, response)?;
    if grid.is_empty() {
        return Err(Error::param("lambda grid is empty"));
    }
    if grid.iter().any(|l| !(*l > 0.0 && l.is_finite())) || grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::param("lambda grid must be positive and sorted ascending"));
    }
    if grid.len() == 1 {
        return Ok(grid[0]);
    }
    let r = design.rows();
    let scores = if r >= MIN_CV_ROUNDS {
        cv_scores(design, response, cfg, grid)?
    } else {
        bic_scores(design, response, cfg, grid)?
    };
    let mut best = 0;
    for (k, s) in scores.iter().enumerate() {
        if *s <= scores[best] {
            best = k;
        }
    }
    Ok(grid[best])
}

fn cv_scores(design: &Matrix, response: &[f64], cfg: &SolverConfig, grid: &[f64]) -> Result<Vec<f64>> {
    let r = design.rows();
    let mut scores = vec![0.0; grid.len()];
    for held in cv_folds(r) {
        let train: Vec<usize> = (0..r).filter(|t| !held.contains(t)).collect();
        let x_train = design.select_rows(&train);
        let y_train: Vec<f64> = train.iter().map(|&t| response[t]).collect();
        let x_test = design.select_rows(&held);
        let y_test: Vec<f64> = held.iter().map(|&t| response[t]).collect();
        let weights = weights_for(cfg, &x_train, &y_train)?;
        let prepared = Prepared::new(&x_train, &y_train);
        for (score, &lambda) in scores.iter_mut().zip(grid) {
            let trial = SolverConfig {
                lambda: per_unit_weight(lambda, &weights),
                ..cfg.clone()
            };
            let fit = prepared.descend(&trial, weights.as_slice());
            *score += sq_error(&x_test, &y_test, &fit.beta);
        }
    }
    Ok(scores)
}

fn bic_scores(design: &Matrix, response: &[f64], cfg: &SolverConfig, grid: &[f64]) -> Result<Vec<f64>> {
    let r = design.rows() as f64;
    let weights = weights_for(cfg, design, response)?;
    let prepared = Prepared::new(design, response);
    let floor = 1e-12 * dot(response, response).max(f64::MIN_POSITIVE);
    Ok(grid
        .iter()
        .map(|&lambda| {
            let trial = SolverConfig {
                lambda: per_unit_weight(lambda, &weights),
                ..cfg.clone()
            };
            let fit = prepared.descend(&trial, weights.as_slice());
            let rss = sq_error(design, response, &fit.beta).max(floor);
            let active = fit.beta.iter().filter(|b| **b != 0.0).count() as f64;
            r * (rss / r).ln() + r.ln() * active
        })
        .collect())
}
