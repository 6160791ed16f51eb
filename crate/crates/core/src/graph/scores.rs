use std::path::Path;

use crate::error::{Error, Result};
use crate::textio;

/// Real-valued N×N edge scores with a per-pair count of contributing splits.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeScoreMatrix {
    n: usize,
    scores: Vec<f64>,
    coverage: Vec<u32>,
}

impl EdgeScoreMatrix {
    pub fn zeros(n: usize) -> Self {
        EdgeScoreMatrix {
            n,
            scores: vec![0.0; n * n],
            coverage: vec![0; n * n],
        }
    }

    /// Fully covered matrix from row-major scores; the diagonal is zeroed.
    pub fn from_dense(n: usize, mut scores: Vec<f64>) -> Result<Self> {
        if scores.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: scores.len(),
            });
        }
        if let Some(bad) = scores.iter().position(|v| !v.is_finite()) {
            return Err(Error::data(format!("non-finite score at index {bad}")));
        }
        let mut coverage = vec![1; n * n];
        for i in 0..n {
            scores[i * n + i] = 0.0;
            coverage[i * n + i] = 0;
        }
        Ok(EdgeScoreMatrix { n, scores, coverage })
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.scores[i * self.n + j]
    }

    #[inline]
    pub fn coverage(&self, i: usize, j: usize) -> u32 {
        self.coverage[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.scores
    }

    /// Add one estimate for the ordered pair `(i, j)`.
    #[inline]
    pub fn record(&mut self, i: usize, j: usize, value: f64) {
        let idx = i * self.n + j;
        self.scores[idx] += value;
        self.coverage[idx] += 1;
    }

    /// Entry-wise sum of scores and coverage.
    pub fn accumulate(&mut self, other: &EdgeScoreMatrix) -> Result<()> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        for (a, b) in self.scores.iter_mut().zip(&other.scores) {
            *a += b;
        }
        for (a, b) in self.coverage.iter_mut().zip(&other.coverage) {
            *a += b;
        }
        Ok(())
    }

    /// Entry-wise mean of several split estimates.
    pub fn mean_of(splits: &[EdgeScoreMatrix]) -> Result<Self> {
        let first = splits
            .first()
            .ok_or_else(|| Error::param("cannot average zero score matrices"))?;
        if splits.len() == 1 {
            return Ok(first.clone());
        }
        let mut total = EdgeScoreMatrix::zeros(first.n);
        for s in splits {
            total.accumulate(s)?;
        }
        let m = splits.len() as f64;
        for v in &mut total.scores {
            *v /= m;
        }
        Ok(total)
    }

    /// Replace (i,j) and (j,i) by their average.
    pub fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (self.scores[i * n + j] + self.scores[j * n + i]);
                self.scores[i * n + j] = avg;
                self.scores[j * n + i] = avg;
            }
        }
    }

    pub fn min_off_diagonal_coverage(&self) -> u32 {
        let n = self.n;
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| i * n + j))
            .map(|idx| self.coverage[idx])
            .min()
            .unwrap_or(0)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        textio::write_matrix_csv(path, self.n, self.n, &self.scores)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let (rows, cols, data) = textio::read_matrix_csv(path)?;
        if rows != cols {
            return Err(Error::data(format!(
                "{}: score matrix is {rows}x{cols}, expected square",
                path.display()
            )));
        }
        EdgeScoreMatrix::from_dense(rows, data)
    }
}
