use super::update::{md_update_unchecked, signal_update_unchecked, soft_threshold};
use super::{BlockEstimate, Penalty, SolverConfig, WeightVector};
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};

/// Columns whose squared norm falls below this fraction of the largest are
/// treated as zero.
const DEGENERATE_RTOL: f64 = 1e-13;

pub(crate) struct CdOutcome {
    pub beta: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
    pub degenerate: Vec<usize>,
}

#[inline]
fn penalty_term(cfg: &SolverConfig, w: f64, b: f64) -> f64 {
    match cfg.penalty {
        Penalty::Lasso => cfg.lambda * w * b.abs(),
        Penalty::SignalLasso => w * (cfg.lambda * b.abs() + cfg.lambda2 * (b - 1.0).abs()),
        Penalty::Alms => cfg.lambda * w * b.abs().min((b - 1.0).abs()),
    }
}

/// `½‖y − Xβ‖² + Σ_j pen_j(β_j)` for the configured penalty.
pub fn objective(design: &Matrix, response: &[f64], cfg: &SolverConfig, weights: &WeightVector, beta: &[f64]) -> f64 {
    let fitted = design.mul_vec(beta);
    let rss: f64 = response.iter().zip(&fitted).map(|(y, f)| (y - f) * (y - f)).sum();
    let pen: f64 = beta
        .iter()
        .zip(weights.as_slice())
        .map(|(&b, &w)| penalty_term(cfg, w, b))
        .sum();
    0.5 * rss + pen
}

#[inline]
fn coordinate_update(cfg: &SolverConfig, rho: f64, c: f64, w: f64) -> f64 {
    match cfg.penalty {
        Penalty::Lasso => soft_threshold(rho, cfg.lambda * w) / c,
        Penalty::SignalLasso => signal_update_unchecked(rho, c, cfg.lambda * w, cfg.lambda2 * w),
        Penalty::Alms => md_update_unchecked(rho, c, cfg.lambda * w),
    }
}

fn degenerate_columns(sq_norms: &[f64]) -> Vec<usize> {
    let max_c = sq_norms.iter().copied().fold(0.0, f64::max);
    (0..sq_norms.len())
        .filter(|&j| {
            let c = sq_norms[j];
            !(c > 0.0) || c < DEGENERATE_RTOL * max_c
        })
        .collect()
}

/// A regression prepared for repeated coordinate-descent fits.
///
/// Tall designs keep `G = XᵀX` and `Xᵀy` and use covariance updates; wide
/// designs (`r < p`) keep the columns and update the residual directly,
/// which is cheaper per coordinate.
pub(crate) enum Prepared {
    Covariance { gram: Matrix, xty: Vec<f64> },
    Residual { columns: Vec<f64>, sq_norms: Vec<f64>, response: Vec<f64> },
}

impl Prepared {
    pub fn new(design: &Matrix, response: &[f64]) -> Self {
        let (r, p) = (design.rows(), design.cols());
        if r >= p {
            return Prepared::Covariance {
                gram: design.gram(),
                xty: design.t_mul_vec(response),
            };
        }
        let mut columns = vec![0.0; p * r];
        for t in 0..r {
            for (j, &x) in design.row(t).iter().enumerate() {
                columns[j * r + t] = x;
            }
        }
        let sq_norms = columns.chunks_exact(r.max(1)).map(|c| dot(c, c)).collect();
        Prepared::Residual {
            columns,
            sq_norms,
            response: response.to_vec(),
        }
    }

    /// Cyclic coordinate descent from a zero start.
    pub fn descend(&self, cfg: &SolverConfig, weights: &[f64]) -> CdOutcome {
        match self {
            Prepared::Covariance { gram, xty } => descend_covariance(gram, xty, cfg, weights),
            Prepared::Residual {
                columns,
                sq_norms,
                response,
            } => descend_residual(columns, sq_norms, response, cfg, weights),
        }
    }
}

fn descend_covariance(gram: &Matrix, xty: &[f64], cfg: &SolverConfig, weights: &[f64]) -> CdOutcome {
    let p = xty.len();
    let diag: Vec<f64> = (0..p).map(|j| gram.get(j, j)).collect();
    let degenerate = degenerate_columns(&diag);
    let mut active = vec![true; p];
    for &j in &degenerate {
        active[j] = false;
    }

    let mut beta = vec![0.0; p];
    // q = Xᵀ(y − Xβ)
    let mut q = xty.to_vec();
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < cfg.max_iters {
        sweeps += 1;
        let mut max_delta = 0.0f64;
        for j in 0..p {
            if !active[j] {
                continue;
            }
            let c = diag[j];
            let new = coordinate_update(cfg, q[j] + c * beta[j], c, weights[j]);
            let delta = new - beta[j];
            if delta != 0.0 {
                beta[j] = new;
                for (qk, gk) in q.iter_mut().zip(gram.row(j)) {
                    *qk -= delta * gk;
                }
                max_delta = max_delta.max(delta.abs());
            }
        }
        if max_delta < cfg.tol {
            converged = true;
            break;
        }
    }
    CdOutcome {
        beta,
        sweeps,
        converged,
        degenerate,
    }
}

fn descend_residual(columns: &[f64], sq_norms: &[f64], response: &[f64], cfg: &SolverConfig, weights: &[f64]) -> CdOutcome {
    let p = sq_norms.len();
    let r = response.len();
    let degenerate = degenerate_columns(sq_norms);
    let mut active = vec![true; p];
    for &j in &degenerate {
        active[j] = false;
    }

    let mut beta = vec![0.0; p];
    let mut resid = response.to_vec();
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < cfg.max_iters {
        sweeps += 1;
        let mut max_delta = 0.0f64;
        for j in 0..p {
            if !active[j] {
                continue;
            }
            let x = &columns[j * r..(j + 1) * r];
            let c = sq_norms[j];
            let new = coordinate_update(cfg, dot(x, &resid) + c * beta[j], c, weights[j]);
            let delta = new - beta[j];
            if delta != 0.0 {
                beta[j] = new;
                for (e, xt) in resid.iter_mut().zip(x) {
                    *e -= delta * xt;
                }
                max_delta = max_delta.max(delta.abs());
            }
        }
        if max_delta < cfg.tol {
            converged = true;
            break;
        }
    }
    CdOutcome {
        beta,
        sweeps,
        converged,
        degenerate,
    }
}

pub(crate) fn check_finite(design: &Matrix, response: &[f64]) -> Result<()> {
    if design.rows() != response.len() {
        return Err(Error::DimensionMismatch {
            expected: design.rows(),
            got: response.len(),
        });
    }
    if design.as_slice().iter().chain(response).any(|v| !v.is_finite()) {
        return Err(Error::data("design or response contains non-finite values"));
    }
    Ok(())
}

/// Fit one regression with the configured penalty.
pub fn solve_block(design: &Matrix, response: &[f64], cfg: &SolverConfig, weights: &WeightVector) -> Result<BlockEstimate> {
    cfg.validate()?;
    check_finite(design, response)?;
    let p = design.cols();
    if p == 0 {
        return Err(Error::param("design has no columns"));
    }
    if weights.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: weights.len(),
        });
    }
    let out = Prepared::new(design, response).descend(cfg, weights.as_slice());
    let residuals: Vec<f64> = (0..design.rows())
        .map(|t| response[t] - dot(design.row(t), &out.beta))
        .collect();
    Ok(BlockEstimate {
        coefficients: out.beta,
        residuals,
        iterations_used: out.sweeps,
        converged: out.converged,
        degenerate_columns: out.degenerate,
    })
}
