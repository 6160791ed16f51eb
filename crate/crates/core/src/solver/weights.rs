use super::WeightVector;
use crate::error::{Error, Result};
use crate::linalg::{cholesky_solve, Matrix};

pub const WEIGHT_MIN: f64 = 1e-4;
pub const WEIGHT_MAX: f64 = 1e8;
const WEIGHT_DELTA: f64 = 1e-6;
/// Ridge constant as a fraction of the mean column energy `trace(XᵀX)/p`.
const RIDGE_FRACTION: f64 = 1e-3;

/// Pilot fit for the adaptive weights: least squares when `r ≥ p` and the
/// normal equations are well posed, ridge otherwise. The ridge is solved in
/// its `r × r` dual form when `r < p`.
pub fn pilot_estimate(design: &Matrix, response: &[f64]) -> Result<Vec<f64>> {
    super::cd::check_finite(design, response)?;
    let (r, p) = (design.rows(), design.cols());
    let energy: f64 = design.as_slice().iter().map(|x| x * x).sum();
    let scale = energy / p.max(1) as f64;
    if !(scale > 0.0) {
        return Ok(vec![0.0; p]);
    }
    let ridge = RIDGE_FRACTION * scale;
    if r >= p {
        let gram = design.gram();
        let xty = design.t_mul_vec(response);
        if let Ok(beta) = cholesky_solve(&gram, 0.0, &xty) {
            if beta.iter().all(|b| b.is_finite()) {
                return Ok(beta);
            }
        }
        cholesky_solve(&gram, ridge, &xty)
    } else {
        let alpha = cholesky_solve(&design.outer_gram(), ridge, response)?;
        Ok(design.t_mul_vec(&alpha))
    }
}

/// `w_j = 1 / (min{|β̂_j|, |β̂_j − 1|} + δ)^γ`, clamped to `[1e-4, 1e8]`.
///
/// A pilot near either signal value gets a large weight, holding the
/// coefficient in that signal's basin.
pub fn adaptive_weights(initial: &[f64], gamma: f64) -> Result<WeightVector> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::param(format!("weight exponent must be > 0, got {gamma}")));
    }
    if initial.iter().any(|b| !b.is_finite()) {
        return Err(Error::data("pilot estimate contains non-finite values"));
    }
    let weights = initial
        .iter()
        .map(|&b| {
            let d = b.abs().min((b - 1.0).abs());
            (1.0 / (d + WEIGHT_DELTA).powf(gamma)).clamp(WEIGHT_MIN, WEIGHT_MAX)
        })
        .collect();
    WeightVector::new(weights)
}

/// `λ` divided by the smallest weight: every coefficient is penalised at
/// rate at least `λ`, whatever the overall magnitude of the adaptive weights.
pub fn per_unit_weight(lambda: f64, weights: &WeightVector) -> f64 {
    match weights.as_slice().iter().copied().reduce(f64::min) {
        Some(min) => lambda / min,
        None => lambda,
    }
}
