use super::DynamicsDataset;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// One node's regression: rows are rounds, columns are candidate partners.
#[derive(Clone, Debug)]
pub struct NodeDesign {
    pub design: Matrix,
    pub response: Vec<f64>,
    /// Partner node of each design column.
    pub columns: Vec<usize>,
}

/// Extract `ψ_{node,j}^t` for `j ∈ columns \ {node}` and the node's responses.
///
/// This is the only constructor of regression designs in the crate; its size
/// is `r × |columns|`, never the stacked `rN × N²` system.
pub fn build_design(d: &DynamicsDataset, node: usize, columns: &[usize]) -> Result<NodeDesign> {
    let n = d.n_nodes();
    if node >= n {
        return Err(Error::param(format!("node {node} out of range for {n} nodes")));
    }
    let cols: Vec<usize> = columns.iter().copied().filter(|&j| j != node).collect();
    if cols.is_empty() {
        return Err(Error::param(format!(
            "no candidate columns for node {node} after excluding itself"
        )));
    }
    if let Some(&bad) = cols.iter().find(|&&j| j >= n) {
        return Err(Error::param(format!("column node {bad} out of range for {n} nodes")));
    }
    let r = d.n_rounds();
    let mut data = Vec::with_capacity(r * cols.len());
    let mut response = Vec::with_capacity(r);
    for t in 0..r {
        let row = &d.psi(t)[node * n..(node + 1) * n];
        data.extend(cols.iter().map(|&j| row[j]));
        response.push(d.y_at(t, node));
    }
    Ok(NodeDesign {
        design: Matrix::from_row_major(r, cols.len(), data)?,
        response,
        columns: cols,
    })
}
