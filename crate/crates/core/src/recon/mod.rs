//! The distributed estimator: per split, partition the nodes into `k`
//! groups, estimate every `(k₁, k₂)` sub-network independently, take the
//! union, then average the `m` split estimates and binarise.

mod block;
mod pipeline;

pub use block::{estimate_block, BlockScores, BlockTask};
pub use pipeline::{binarize, plan_tasks, reconstruct_palms, reconstruct_split, ReconReport};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Directedness;
use crate::solver::{Penalty, SolverConfig};

/// How λ is chosen for each node regression.
///
/// Values are relative to the regression's mean column energy
/// `trace(XᵀX)/p`, so one setting transfers across dynamics, block sizes and
/// round counts. The signal-lasso `lambda2` in [`SolverConfig`] is scaled
/// the same way.
#[derive(Clone, Debug, PartialEq)]
pub enum Tuning {
    Fixed(f64),
    /// Select per regression with [`crate::solver::select_lambda`].
    CrossValidated(Vec<f64>),
}

impl Tuning {
    /// Geometric grid `10^0 … 10^2`, two points per decade.
    pub fn default_grid() -> Vec<f64> {
        (0..5).map(|k| 10f64.powf(k as f64 / 2.0)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Tuning::Fixed(l) if !(*l >= 0.0 && l.is_finite()) => {
                Err(Error::param(format!("fixed lambda must be >= 0, got {l}")))
            }
            Tuning::CrossValidated(grid)
                if grid.is_empty()
                    || grid.iter().any(|l| !(*l > 0.0 && l.is_finite()))
                    || grid.windows(2).any(|w| w[0] > w[1]) =>
            {
                Err(Error::param("lambda grid must be non-empty, positive and ascending"))
            }
            _ => Ok(()),
        }
    }
}

impl Default for Tuning {
    fn default() -> Self {
        Tuning::CrossValidated(Tuning::default_grid())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconConfig {
    /// Number of node groups `k` per split.
    pub n_groups: usize,
    /// Number of random splits `m` averaged.
    pub n_splits: usize,
    pub solver: SolverConfig,
    pub tuning: Tuning,
    /// Size of the worker pool executing block tasks.
    pub workers: usize,
    /// Scores `>= τ` become edges.
    pub binarize_threshold: f64,
    pub master_seed: u64,
    /// Undirected targets have `(i,j)` and `(j,i)` scores averaged before binarisation.
    pub directedness: Directedness,
    /// Run all splits' tasks in one pool instead of split by split.
    pub concurrent_splits: bool,
    /// Print a block counter to standard error.
    pub progress: bool,
}

impl Default for ReconConfig {
    fn default() -> Self {
        ReconConfig {
            n_groups: 5,
            n_splits: 5,
            solver: SolverConfig {
                lambda2: 1.0,
                ..SolverConfig::default()
            },
            tuning: Tuning::default(),
            workers: 1,
            binarize_threshold: 0.5,
            master_seed: 0,
            directedness: Directedness::Undirected,
            concurrent_splits: false,
            progress: false,
        }
    }
}

impl ReconConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_groups == 0 {
            return Err(Error::param("number of groups k must be >= 1"));
        }
        if self.n_splits == 0 {
            return Err(Error::param("number of splits m must be >= 1"));
        }
        if self.workers == 0 {
            return Err(Error::param("workers must be >= 1"));
        }
        if !(self.binarize_threshold > 0.0 && self.binarize_threshold < 1.0) {
            return Err(Error::param(format!(
                "binarisation threshold must lie in (0, 1), got {}",
                self.binarize_threshold
            )));
        }
        self.solver.validate()?;
        self.tuning.validate()
    }
}

/// Estimators compared in the benchmarks. The `P*` variants run a baseline
/// penalty inside the distributed pipeline; the others are the
/// non-distributed fit (`k = 1`, `m = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Lasso,
    SignalLasso,
    Alms,
    Palms,
    PLasso,
    PSignalLasso,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Lasso,
        Method::PLasso,
        Method::SignalLasso,
        Method::PSignalLasso,
        Method::Alms,
        Method::Palms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Lasso => "lasso",
            Method::SignalLasso => "signal_lasso",
            Method::Alms => "alms",
            Method::Palms => "palms",
            Method::PLasso => "p_lasso",
            Method::PSignalLasso => "p_signal_lasso",
        }
    }

    pub fn penalty(self) -> Penalty {
        match self {
            Method::Lasso | Method::PLasso => Penalty::Lasso,
            Method::SignalLasso | Method::PSignalLasso => Penalty::SignalLasso,
            Method::Alms | Method::Palms => Penalty::Alms,
        }
    }

    pub fn is_distributed(self) -> bool {
        matches!(self, Method::Palms | Method::PLasso | Method::PSignalLasso)
    }

    /// `base` with this method's penalty; non-distributed methods force `k = m = 1`.
    pub fn configure(self, base: &ReconConfig) -> ReconConfig {
        let mut cfg = base.clone();
        cfg.solver.penalty = self.penalty();
        if !self.is_distributed() {
            cfg.n_groups = 1;
            cfg.n_splits = 1;
        }
        cfg
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::param(format!("unknown method {s:?}")))
    }
}
