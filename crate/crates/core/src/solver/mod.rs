//! Penalised least squares on one node regression by cyclic coordinate
//! descent with exact one-dimensional updates.
//!
//! The loss is `½‖y − Xβ‖² + Σ_j pen_j(β_j)` where, per coefficient,
//!
//! * lasso: `λ·w_j·|β|`
//! * signal lasso: `w_j·(λ|β| + λ₂|β − 1|)`
//! * multi-directional (ALMS): `λ·w_j·min{|β|, |β − 1|}`
//!
//! The multi-directional penalty is non-convex, so descent reaches a
//! coordinate-wise minimum.

mod cd;
mod tuning;
mod update;
mod weights;

use std::fmt;
use std::str::FromStr;

pub use cd::{objective, solve_block};
pub use tuning::{cv_folds, select_lambda, MIN_CV_ROUNDS};
pub use update::{md_coordinate_update, signal_lasso_update, soft_threshold};
pub use weights::{adaptive_weights, per_unit_weight, pilot_estimate, WEIGHT_MAX, WEIGHT_MIN};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Penalty {
    Lasso,
    SignalLasso,
    Alms,
}

impl fmt::Display for Penalty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Penalty::Lasso => "lasso",
            Penalty::SignalLasso => "signal_lasso",
            Penalty::Alms => "alms",
        })
    }
}

impl FromStr for Penalty {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lasso" => Ok(Penalty::Lasso),
            "signal_lasso" => Ok(Penalty::SignalLasso),
            "alms" => Ok(Penalty::Alms),
            other => Err(Error::param(format!("unknown penalty {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub penalty: Penalty,
    pub lambda: f64,
    /// Pull toward 1 for the signal lasso; unused otherwise.
    pub lambda2: f64,
    /// Maximum number of full sweeps.
    pub max_iters: usize,
    /// Convergence threshold on the largest coefficient change in a sweep.
    pub tol: f64,
    /// Exponent of the adaptive weights.
    pub weight_gamma: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            penalty: Penalty::Alms,
            lambda: 0.0,
            lambda2: 0.0,
            max_iters: 10_000,
            tol: 1e-7,
            weight_gamma: 1.0,
        }
    }
}

impl SolverConfig {
    pub fn with_penalty(penalty: Penalty) -> Self {
        SolverConfig {
            penalty,
            ..SolverConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::param(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if !(self.lambda2 >= 0.0 && self.lambda2.is_finite()) {
            return Err(Error::param(format!("lambda2 must be >= 0, got {}", self.lambda2)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::param(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::param("max_iters must be >= 1"));
        }
        if !(self.weight_gamma > 0.0 && self.weight_gamma.is_finite()) {
            return Err(Error::param(format!(
                "weight_gamma must be > 0, got {}",
                self.weight_gamma
            )));
        }
        Ok(())
    }
}

/// Non-negative per-coefficient penalty multipliers.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::data("weights must be finite and non-negative"));
        }
        Ok(WeightVector(weights))
    }

    pub fn uniform(p: usize) -> Self {
        WeightVector(vec![1.0; p])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockEstimate {
    pub coefficients: Vec<f64>,
    /// `y − Xβ` at the returned coefficients.
    pub residuals: Vec<f64>,
    pub iterations_used: usize,
    pub converged: bool,
    /// Columns with zero norm; their coefficients are fixed at 0.
    pub degenerate_columns: Vec<usize>,
}
