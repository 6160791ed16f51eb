//! Reconstruction of latent binary networks from observed nodal dynamics.
//!
//! The node set is split into `k` groups; each of the `k²` sub-networks is
//! estimated independently by penalised regression with a penalty that pulls
//! every coefficient toward the nearer of the two signal values `{0, 1}`.
//! Estimates from `m` random splits are averaged and thresholded.
//!
//! ```no_run
//! use palms::{dynamics, graph, recon};
//!
//! let truth = graph::er_generate(50, 0.1, 7)?;
//! let noise = dynamics::NoiseSpec::new(1.0, 8)?;
//! let data = dynamics::simulate_ultimatum(&truth, 10, noise, 9)?;
//! let report = recon::reconstruct_palms(&data, &recon::ReconConfig::default())?;
//! println!("{} edges", report.binary.edge_count());
//! # Ok::<(), palms::Error>(())
//! ```

pub mod bench;
pub mod cli;
pub mod dynamics;
mod error;
pub mod graph;
pub mod linalg;
pub mod metrics;
pub mod recon;
pub mod seed;
pub mod solver;
pub mod textio;

pub use error::{Error, Result};
