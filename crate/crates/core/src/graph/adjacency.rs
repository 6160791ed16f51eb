use rand::Rng as _;

use crate::error::{Error, Result};
use crate::seed;

/// Networks up to this many nodes are stored as a dense bit matrix; larger
/// ones as a sorted list of ordered pairs.
pub const DENSE_LIMIT: usize = 8192;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Directedness {
    Directed,
    Undirected,
}

impl Directedness {
    pub fn is_directed(self) -> bool {
        matches!(self, Directedness::Directed)
    }
}

#[derive(Clone, Debug)]
enum Storage {
    Dense(Vec<bool>),
    /// Ordered pairs `(i, j)`, sorted; both orientations present when undirected.
    Sparse(Vec<(u32, u32)>),
}

/// Binary N×N network with an empty diagonal.
#[derive(Clone, Debug)]
pub struct AdjacencyMatrix {
    n: usize,
    directedness: Directedness,
    storage: Storage,
}

impl AdjacencyMatrix {
    pub fn empty(n: usize, directedness: Directedness) -> Self {
        let storage = if n <= DENSE_LIMIT {
            Storage::Dense(vec![false; n * n])
        } else {
            Storage::Sparse(Vec::new())
        };
        AdjacencyMatrix {
            n,
            directedness,
            storage,
        }
    }

    /// Build from a list of pairs. Self-loops are dropped and duplicates
    /// collapsed; for undirected networks `(i, j)` also sets `(j, i)`.
    pub fn from_edges<I>(n: usize, directedness: Directedness, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs = Vec::new();
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::param(format!(
                    "edge ({i}, {j}) out of range for {n} nodes"
                )));
            }
            if i == j {
                continue;
            }
            pairs.push((i, j));
            if !directedness.is_directed() {
                pairs.push((j, i));
            }
        }
        let storage = if n <= DENSE_LIMIT {
            let mut bits = vec![false; n * n];
            for (i, j) in pairs {
                bits[i * n + j] = true;
            }
            Storage::Dense(bits)
        } else {
            let mut sorted: Vec<(u32, u32)> =
                pairs.into_iter().map(|(i, j)| (i as u32, j as u32)).collect();
            sorted.sort_unstable();
            sorted.dedup();
            Storage::Sparse(sorted)
        };
        Ok(AdjacencyMatrix {
            n,
            directedness,
            storage,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn directedness(&self) -> Directedness {
        self.directedness
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        match &self.storage {
            Storage::Dense(bits) => bits[i * self.n + j],
            Storage::Sparse(pairs) => pairs.binary_search(&(i as u32, j as u32)).is_ok(),
        }
    }

    /// Out-neighbours of `i` in increasing order.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        match &self.storage {
            Storage::Dense(bits) => (0..self.n).filter(|&j| bits[i * self.n + j]).collect(),
            Storage::Sparse(pairs) => {
                let lo = pairs.partition_point(|&(a, _)| (a as usize) < i);
                let hi = pairs.partition_point(|&(a, _)| (a as usize) <= i);
                pairs[lo..hi].iter().map(|&(_, b)| b as usize).collect()
            }
        }
    }

    /// Edges in sorted order; for undirected networks each edge once as `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let keep = |i: usize, j: usize| self.directedness.is_directed() || i < j;
        match &self.storage {
            Storage::Dense(bits) => {
                let mut out = Vec::new();
                for i in 0..self.n {
                    for j in 0..self.n {
                        if bits[i * self.n + j] && keep(i, j) {
                            out.push((i, j));
                        }
                    }
                }
                out
            }
            Storage::Sparse(pairs) => pairs
                .iter()
                .map(|&(i, j)| (i as usize, j as usize))
                .filter(|&(i, j)| keep(i, j))
                .collect(),
        }
    }

    /// Number of edges (unordered pairs when undirected).
    pub fn edge_count(&self) -> usize {
        let ordered = match &self.storage {
            Storage::Dense(bits) => bits.iter().filter(|&&b| b).count(),
            Storage::Sparse(pairs) => pairs.len(),
        };
        if self.directedness.is_directed() {
            ordered
        } else {
            ordered / 2
        }
    }

    /// Number of admissible pairs: C(N,2) undirected, N(N-1) directed.
    pub fn admissible_pairs(&self) -> usize {
        let ordered = self.n * self.n.saturating_sub(1);
        if self.directedness.is_directed() {
            ordered
        } else {
            ordered / 2
        }
    }

    /// Relabel nodes: node `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        let edges = self.edges().into_iter().map(|(i, j)| (perm[i], perm[j]));
        AdjacencyMatrix::from_edges(self.n, self.directedness, edges)
    }
}

impl PartialEq for AdjacencyMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.directedness == other.directedness
            && self.edges() == other.edges()
    }
}

/// Undirected Erdős–Rényi graph: each unordered pair present independently
/// with probability `edge_prob`.
pub fn er_generate(n_nodes: usize, edge_prob: f64, seed: u64) -> Result<AdjacencyMatrix> {
    if n_nodes < 2 {
        return Err(Error::param(format!("n_nodes must be >= 2, got {n_nodes}")));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::param(format!(
            "edge probability must lie in [0, 1], got {edge_prob}"
        )));
    }
    let mut rng = seed::rng_for(seed, &[0xE5]);
    let mut edges = Vec::new();
    for i in 0..n_nodes {
        for j in (i + 1)..n_nodes {
            if rng.random::<f64>() < edge_prob {
                edges.push((i, j));
            }
        }
    }
    AdjacencyMatrix::from_edges(n_nodes, Directedness::Undirected, edges)
}

pub fn density(a: &AdjacencyMatrix) -> f64 {
    let pairs = a.admissible_pairs();
    if pairs == 0 {
        return 0.0;
    }
    a.edge_count() as f64 / pairs as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_extremes() {
        let empty = er_generate(10, 0.0, 3).unwrap();
        assert_eq!(empty.edge_count(), 0);
        assert_eq!(density(&empty), 0.0);
        let full = er_generate(10, 1.0, 3).unwrap();
        assert_eq!(full.edge_count(), 45);
        assert_eq!(density(&full), 1.0);
    }

    #[test]
    fn er_rejects_bad_probability() {
        assert!(matches!(er_generate(10, 1.5, 0), Err(Error::Parameter(_))));
        assert!(matches!(er_generate(10, -0.1, 0), Err(Error::Parameter(_))));
        assert!(matches!(er_generate(1, 0.5, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn er_is_symmetric_with_empty_diagonal() {
        let a = er_generate(30, 0.4, 11).unwrap();
        for i in 0..30 {
            assert!(!a.get(i, i));
            for j in 0..30 {
                assert_eq!(a.get(i, j), a.get(j, i));
            }
        }
        assert_eq!(a, er_generate(30, 0.4, 11).unwrap());
    }

    #[test]
    fn density_of_large_sparse_counts() {
        // 4039 nodes, 88234 edges: only the counts matter.
        let n = 4039usize;
        let pairs = n * (n - 1) / 2;
        let d = 88234.0 / pairs as f64;
        assert!((d - 0.01082).abs() < 5e-6);
    }

    #[test]
    fn sparse_storage_matches_dense_queries() {
        let n = DENSE_LIMIT + 5;
        let edges = vec![(0, 1), (n - 1, 3), (7, 7), (3, n - 1), (10, 20)];
        let a = AdjacencyMatrix::from_edges(n, Directedness::Undirected, edges).unwrap();
        assert!(!a.is_dense());
        assert_eq!(a.edge_count(), 3);
        assert!(a.get(1, 0) && a.get(3, n - 1) && a.get(20, 10));
        assert!(!a.get(7, 7));
        assert_eq!(a.neighbors(3), vec![n - 1]);
        assert_eq!(a.edges(), vec![(0, 1), (3, n - 1), (10, 20)]);
    }

    #[test]
    fn directed_counts_ordered_pairs() {
        let a = AdjacencyMatrix::from_edges(3, Directedness::Directed, [(0, 1), (1, 0), (1, 2)])
            .unwrap();
        assert_eq!(a.edge_count(), 3);
        assert_eq!(a.admissible_pairs(), 6);
        assert!(!a.get(2, 1));
    }
}
