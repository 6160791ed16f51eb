use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::seed;

/// Assignment of nodes to `k` disjoint groups for one split.
///
/// Groups are numbered `0..k`; node lists within a group are sorted so that
/// a partition is fully described by its assignment vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    split_id: u64,
    assignment: Vec<usize>,
    groups: Vec<Vec<usize>>,
}

impl Partition {
    pub fn from_assignment(assignment: Vec<usize>, n_groups: usize, split_id: u64) -> Result<Self> {
        let mut groups = vec![Vec::new(); n_groups];
        for (node, &g) in assignment.iter().enumerate() {
            if g >= n_groups {
                return Err(Error::param(format!(
                    "node {node} assigned to group {g} of {n_groups}"
                )));
            }
            groups[g].push(node);
        }
        Ok(Partition {
            split_id,
            assignment,
            groups,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.assignment.len()
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn split_id(&self) -> u64 {
        self.split_id
    }

    pub fn group_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn group(&self, g: usize) -> &[usize] {
        &self.groups[g]
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn max_group_size(&self) -> usize {
        self.groups.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Uniformly random balanced partition; group sizes are ⌊N/k⌋ or ⌈N/k⌉.
pub fn partition_nodes(n_nodes: usize, n_groups: usize, seed: u64, split_id: u64) -> Result<Partition> {
    if n_nodes == 0 || n_groups == 0 {
        return Err(Error::param("partition needs at least one node and one group"));
    }
    if n_groups > n_nodes {
        return Err(Error::param(format!(
            "cannot split {n_nodes} nodes into {n_groups} groups"
        )));
    }
    let mut order: Vec<usize> = (0..n_nodes).collect();
    order.shuffle(&mut seed::rng_for(seed, &[0x9A47, split_id]));

    let base = n_nodes / n_groups;
    let extra = n_nodes % n_groups;
    let mut assignment = vec![0; n_nodes];
    let mut cursor = 0;
    for g in 0..n_groups {
        let size = base + usize::from(g < extra);
        for &node in &order[cursor..cursor + size] {
            assignment[node] = g;
        }
        cursor += size;
    }
    Partition::from_assignment(assignment, n_groups, split_id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sizes(p: &Partition) -> Vec<usize> {
        let mut s: Vec<usize> = p.groups().iter().map(Vec::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    #[test]
    fn fifty_into_five() {
        let p = partition_nodes(50, 5, 1, 1).unwrap();
        assert_eq!(sizes(&p), vec![10; 5]);
    }

    #[test]
    fn seven_into_three() {
        let p = partition_nodes(7, 3, 9, 1).unwrap();
        assert_eq!(sizes(&p), vec![3, 2, 2]);
    }

    #[test]
    fn single_group_holds_everything() {
        let p = partition_nodes(5, 1, 4, 1).unwrap();
        assert_eq!(p.group(0), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn too_many_groups() {
        assert!(matches!(partition_nodes(3, 4, 0, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn splits_differ() {
        let a = partition_nodes(40, 4, 2, 1).unwrap();
        let b = partition_nodes(40, 4, 2, 2).unwrap();
        assert_ne!(a.assignment, b.assignment);
    }

    proptest! {
        #[test]
        fn balanced_disjoint_and_deterministic(n in 1usize..200, k_frac in 0.0f64..1.0, seed: u64, split: u64) {
            let k = 1 + ((n - 1) as f64 * k_frac) as usize;
            let p = partition_nodes(n, k, seed, split).unwrap();
            prop_assert_eq!(&p, &partition_nodes(n, k, seed, split).unwrap());
            let mut seen = vec![false; n];
            for g in p.groups() {
                prop_assert!(g.len() == n / k || g.len() == n.div_ceil(k));
                for &v in g {
                    prop_assert!(!seen[v]);
                    seen[v] = true;
                }
            }
            prop_assert!(seen.into_iter().all(|s| s));
        }
    }
}
