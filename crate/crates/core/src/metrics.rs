//! Reconstruction quality over the off-diagonal ordered entries.

use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, EdgeScoreMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct MetricsReport {
    pub mse: f64,
    /// Absent when the truth has no non-links.
    pub srnl: Option<f64>,
    /// Absent when the truth has no links.
    pub srel: Option<f64>,
    /// Absent for offline evaluation.
    pub cpu_time_s: Option<f64>,
    pub method_tag: String,
}

fn same_size(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Mean squared difference between the binary truth and continuous scores.
pub fn mse(truth: &AdjacencyMatrix, scores: &EdgeScoreMatrix) -> Result<f64> {
    let n = truth.n_nodes();
    same_size(n, scores.n_nodes())?;
    if n < 2 {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let x = if truth.get(i, j) { 1.0 } else { 0.0 };
                let e = x - scores.get(i, j);
                sum += e * e;
            }
        }
    }
    Ok(sum / (n * (n - 1)) as f64)
}

/// Confusion counts over ordered off-diagonal entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Confusion {
    pub true_links: usize,
    pub true_nonlinks: usize,
    pub hit_links: usize,
    pub hit_nonlinks: usize,
}

pub fn confusion(truth: &AdjacencyMatrix, estimate: &AdjacencyMatrix) -> Result<Confusion> {
    let n = truth.n_nodes();
    same_size(n, estimate.n_nodes())?;
    let mut c = Confusion::default();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            match (truth.get(i, j), estimate.get(i, j)) {
                (true, true) => {
                    c.true_links += 1;
                    c.hit_links += 1;
                }
                (true, false) => c.true_links += 1,
                (false, false) => {
                    c.true_nonlinks += 1;
                    c.hit_nonlinks += 1;
                }
                (false, true) => c.true_nonlinks += 1,
            }
        }
    }
    Ok(c)
}

/// Fraction of true non-links estimated as non-links.
pub fn srnl(truth: &AdjacencyMatrix, estimate: &AdjacencyMatrix) -> Result<f64> {
    let c = confusion(truth, estimate)?;
    if c.true_nonlinks == 0 {
        return Err(Error::UndefinedMetric("SRNL"));
    }
    Ok(c.hit_nonlinks as f64 / c.true_nonlinks as f64)
}

/// Fraction of true links estimated as links.
pub fn srel(truth: &AdjacencyMatrix, estimate: &AdjacencyMatrix) -> Result<f64> {
    let c = confusion(truth, estimate)?;
    if c.true_links == 0 {
        return Err(Error::UndefinedMetric("SREL"));
    }
    Ok(c.hit_links as f64 / c.true_links as f64)
}

/// All measures at once; undefined rates are reported as `None`.
pub fn evaluate(
    truth: &AdjacencyMatrix,
    scores: &EdgeScoreMatrix,
    estimate: &AdjacencyMatrix,
    cpu_time_s: Option<f64>,
    method_tag: &str,
) -> Result<MetricsReport> {
    let mse = mse(truth, scores)?;
    let c = confusion(truth, estimate)?;
    let rate = |hit: usize, total: usize| (total > 0).then(|| hit as f64 / total as f64);
    Ok(MetricsReport {
        mse,
        srnl: rate(c.hit_nonlinks, c.true_nonlinks),
        srel: rate(c.hit_links, c.true_links),
        cpu_time_s,
        method_tag: method_tag.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Directedness;

    fn scores_of(a: &AdjacencyMatrix) -> EdgeScoreMatrix {
        let n = a.n_nodes();
        let dense = (0..n * n).map(|k| if a.get(k / n, k % n) { 1.0 } else { 0.0 }).collect();
        EdgeScoreMatrix::from_dense(n, dense).unwrap()
    }

    #[test]
    fn perfect_estimate() {
        let a = AdjacencyMatrix::from_edges(4, Directedness::Undirected, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(mse(&a, &scores_of(&a)).unwrap(), 0.0);
        assert_eq!(srnl(&a, &a).unwrap(), 1.0);
        assert_eq!(srel(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn half_scores_on_empty_truth() {
        let a = AdjacencyMatrix::empty(3, Directedness::Undirected);
        let s = EdgeScoreMatrix::from_dense(3, vec![0.5; 9]).unwrap();
        assert_eq!(mse(&a, &s).unwrap(), 0.25);
    }

    #[test]
    fn complete_and_empty_estimates() {
        let truth = AdjacencyMatrix::from_edges(4, Directedness::Undirected, [(0, 1)]).unwrap();
        let complete = AdjacencyMatrix::from_edges(
            4,
            Directedness::Undirected,
            (0..4).flat_map(|i| (0..4).map(move |j| (i, j))),
        )
        .unwrap();
        assert_eq!(srnl(&truth, &complete).unwrap(), 0.0);
        let empty = AdjacencyMatrix::empty(4, Directedness::Undirected);
        assert_eq!(srel(&truth, &empty).unwrap(), 0.0);
    }

    #[test]
    fn three_of_four_nonlinks() {
        // Directed 3-node truth with 2 links -> 4 non-links; estimate adds one.
        let truth = AdjacencyMatrix::from_edges(3, Directedness::Directed, [(0, 1), (1, 2)]).unwrap();
        let est = AdjacencyMatrix::from_edges(3, Directedness::Directed, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(srnl(&truth, &est).unwrap(), 0.75);
    }

    #[test]
    fn undefined_rates() {
        let empty = AdjacencyMatrix::empty(3, Directedness::Undirected);
        assert!(matches!(srel(&empty, &empty), Err(Error::UndefinedMetric("SREL"))));
        let full = AdjacencyMatrix::from_edges(2, Directedness::Undirected, [(0, 1)]).unwrap();
        assert!(matches!(srnl(&full, &full), Err(Error::UndefinedMetric("SRNL"))));
        let r = evaluate(&empty, &scores_of(&empty), &empty, None, "x").unwrap();
        assert_eq!((r.srel, r.srnl), (None, Some(1.0)));
    }

    #[test]
    fn dimension_mismatch() {
        let a = AdjacencyMatrix::empty(3, Directedness::Undirected);
        let b = AdjacencyMatrix::empty(4, Directedness::Undirected);
        assert!(matches!(srel(&a, &b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(mse(&a, &scores_of(&b)), Err(Error::DimensionMismatch { .. })));
    }
}
