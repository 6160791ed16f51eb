//! Network representation, random graphs, node partitions and edge-list I/O.

mod adjacency;
mod edge_list;
mod partition;
mod scores;

pub use adjacency::{density, er_generate, AdjacencyMatrix, Directedness, DENSE_LIMIT};
pub use edge_list::{format_edge_list, load_edge_list, read_edge_list, save_edge_list, EdgeList};
pub use partition::{partition_nodes, Partition};
pub use scores::EdgeScoreMatrix;
