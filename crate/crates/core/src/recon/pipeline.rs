use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::block::{estimate_block, BlockScores, BlockTask};
use super::ReconConfig;
use crate::dynamics::DynamicsDataset;
use crate::error::{Error, Result};
use crate::graph::{partition_nodes, AdjacencyMatrix, Directedness, EdgeScoreMatrix, Partition};
use crate::seed;

#[derive(Clone, Debug)]
pub struct ReconReport {
    /// Aggregated continuous estimate (symmetrised for undirected targets).
    pub scores: EdgeScoreMatrix,
    pub binary: AdjacencyMatrix,
    pub wall_time_s: f64,
    pub per_block_times: Vec<f64>,
    pub blocks_total: usize,
    pub blocks_failed: usize,
    /// Residual sum of squares summed over all node regressions, per split.
    pub split_residual_ss: Vec<f64>,
    pub blocks_unconverged: usize,
}

/// All `k²` block tasks of one partition, in `(k₁, k₂)` order.
pub fn plan_tasks(partition: &Partition, master_seed: u64) -> Vec<BlockTask> {
    let k = partition.n_groups();
    let split = partition.split_id();
    let mut tasks = Vec::with_capacity(k * k);
    for k1 in 0..k {
        for k2 in 0..k {
            tasks.push(BlockTask {
                split_id: split,
                row_group: k1,
                col_group: k2,
                row_nodes: partition.group(k1).to_vec(),
                col_nodes: partition.group(k2).to_vec(),
                task_seed: seed::derive(master_seed, &[split, k1 as u64, k2 as u64]),
            });
        }
    }
    tasks
}

fn build_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::param(format!("cannot start worker pool: {e}")))
}

struct Progress {
    done: AtomicUsize,
    total: usize,
    enabled: bool,
}

impl Progress {
    fn tick(&self) {
        let done = self.done.fetch_add(1, Ordering::Relaxed) + 1;
        if self.enabled {
            eprint!("\rblocks {done}/{}", self.total);
            if done == self.total {
                eprintln!();
            }
        }
    }
}

/// Run tasks on the pool; results come back in task order.
fn run_tasks(
    pool: &rayon::ThreadPool,
    d: &DynamicsDataset,
    tasks: &[BlockTask],
    cfg: &ReconConfig,
    progress: &Progress,
) -> Result<Vec<BlockScores>> {
    let results: Vec<Result<BlockScores>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|task| {
                let out = estimate_block(d, task, &cfg.solver, &cfg.tuning);
                progress.tick();
                out
            })
            .collect()
    });
    let mut ok = Vec::with_capacity(results.len());
    let mut failed = Vec::new();
    for r in results {
        match r {
            Ok(b) => ok.push(b),
            Err(e) => failed.push(e),
        }
    }
    if failed.is_empty() {
        Ok(ok)
    } else {
        Err(Error::Split(failed))
    }
}

fn assemble(n: usize, tasks: &[BlockTask], blocks: &[BlockScores]) -> EdgeScoreMatrix {
    let mut scores = EdgeScoreMatrix::zeros(n);
    for (task, block) in tasks.iter().zip(blocks) {
        let cols = task.col_nodes.len();
        for (ri, &i) in task.row_nodes.iter().enumerate() {
            for (ci, &j) in task.col_nodes.iter().enumerate() {
                if i != j {
                    scores.record(i, j, block.values[ri * cols + ci]);
                }
            }
        }
    }
    scores
}

fn check_partition(d: &DynamicsDataset, partition: &Partition) -> Result<()> {
    if partition.n_nodes() != d.n_nodes() {
        return Err(Error::DimensionMismatch {
            expected: d.n_nodes(),
            got: partition.n_nodes(),
        });
    }
    Ok(())
}

/// Union of all block estimates for one partition: every ordered off-diagonal
/// pair is covered exactly once.
pub fn reconstruct_split(d: &DynamicsDataset, partition: &Partition, cfg: &ReconConfig) -> Result<EdgeScoreMatrix> {
    cfg.validate()?;
    check_partition(d, partition)?;
    let tasks = plan_tasks(partition, cfg.master_seed);
    let pool = build_pool(cfg.workers)?;
    let progress = Progress {
        done: AtomicUsize::new(0),
        total: tasks.len(),
        enabled: cfg.progress,
    };
    let blocks = run_tasks(&pool, d, &tasks, cfg, &progress)?;
    Ok(assemble(d.n_nodes(), &tasks, &blocks))
}

/// Threshold scores: entry present iff `score >= tau`; diagonal empty.
///
/// For an undirected target the scores are expected to be symmetric; a pair
/// qualifies if either orientation does.
pub fn binarize(scores: &EdgeScoreMatrix, tau: f64, directedness: Directedness) -> Result<AdjacencyMatrix> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::param(format!("threshold must lie in (0, 1), got {tau}")));
    }
    let n = scores.n_nodes();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && scores.get(i, j) >= tau {
                edges.push((i, j));
            }
        }
    }
    AdjacencyMatrix::from_edges(n, directedness, edges)
}

/// The full pipeline: `m` random splits, per-split union, entry-wise mean,
/// optional symmetrisation, binarisation at `τ`.
pub fn reconstruct_palms(d: &DynamicsDataset, cfg: &ReconConfig) -> Result<ReconReport> {
    cfg.validate()?;
    let start = Instant::now();
    let n = d.n_nodes();
    let k = cfg.n_groups;
    if k > n {
        return Err(Error::param(format!("cannot split {n} nodes into {k} groups")));
    }
    let partitions = (1..=cfg.n_splits as u64)
        .map(|l| partition_nodes(n, k, cfg.master_seed, l))
        .collect::<Result<Vec<_>>>()?;
    let pool = build_pool(cfg.workers)?;
    let progress = Progress {
        done: AtomicUsize::new(0),
        total: cfg.n_splits * k * k,
        enabled: cfg.progress,
    };

    let mut split_scores = Vec::with_capacity(cfg.n_splits);
    let mut per_block_times = Vec::with_capacity(cfg.n_splits * k * k);
    let mut split_residual_ss = Vec::with_capacity(cfg.n_splits);
    let mut blocks_unconverged = 0;
    let mut consume = |tasks: &[BlockTask], blocks: &[BlockScores]| {
        per_block_times.extend(blocks.iter().map(|b| b.elapsed_s));
        split_residual_ss.push(blocks.iter().flat_map(|b| &b.residual_ss).sum());
        blocks_unconverged += blocks.iter().filter(|b| !b.all_converged).count();
        split_scores.push(assemble(n, tasks, blocks));
    };

    if cfg.concurrent_splits {
        let plans: Vec<Vec<BlockTask>> = partitions.iter().map(|p| plan_tasks(p, cfg.master_seed)).collect();
        let all: Vec<BlockTask> = plans.iter().flatten().cloned().collect();
        let blocks = run_tasks(&pool, d, &all, cfg, &progress)?;
        for (l, tasks) in plans.iter().enumerate() {
            let per = tasks.len();
            consume(tasks, &blocks[l * per..(l + 1) * per]);
        }
    } else {
        for partition in &partitions {
            let tasks = plan_tasks(partition, cfg.master_seed);
            let blocks = run_tasks(&pool, d, &tasks, cfg, &progress)?;
            consume(&tasks, &blocks);
        }
    }

    let mut scores = EdgeScoreMatrix::mean_of(&split_scores)?;
    if cfg.directedness == Directedness::Undirected {
        scores.symmetrize();
    }
    let binary = binarize(&scores, cfg.binarize_threshold, cfg.directedness)?;
    Ok(ReconReport {
        scores,
        binary,
        wall_time_s: start.elapsed().as_secs_f64(),
        per_block_times,
        blocks_total: cfg.n_splits * k * k,
        blocks_failed: 0,
        split_residual_ss,
        blocks_unconverged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binarize_rules() {
        let zeros = EdgeScoreMatrix::from_dense(3, vec![0.0; 9]).unwrap();
        assert_eq!(binarize(&zeros, 0.5, Directedness::Undirected).unwrap().edge_count(), 0);
        let ones = EdgeScoreMatrix::from_dense(3, vec![1.0; 9]).unwrap();
        let full = binarize(&ones, 0.5, Directedness::Undirected).unwrap();
        assert_eq!(full.edge_count(), 3);
        assert!(!full.get(1, 1));
        let half = EdgeScoreMatrix::from_dense(2, vec![0.0, 0.5, 0.5, 0.0]).unwrap();
        assert_eq!(binarize(&half, 0.5, Directedness::Undirected).unwrap().edge_count(), 1);
        assert!(binarize(&half, 1.0, Directedness::Undirected).is_err());
    }

    #[test]
    fn plan_covers_all_pairs_once() {
        let p = partition_nodes(13, 4, 7, 1).unwrap();
        let tasks = plan_tasks(&p, 3);
        assert_eq!(tasks.len(), 16);
        let mut seen = vec![0; 13 * 13];
        for t in &tasks {
            for &i in &t.row_nodes {
                for &j in &t.col_nodes {
                    seen[i * 13 + j] += 1;
                }
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
        assert_eq!(tasks[5].task_seed, plan_tasks(&p, 3)[5].task_seed);
        assert_ne!(tasks[5].task_seed, tasks[6].task_seed);
    }
}
