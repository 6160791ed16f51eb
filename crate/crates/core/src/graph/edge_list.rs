//! Whitespace-separated edge-list files in the SNAP style.
//!
//! ```text
//! # nodes=4 edges=2
//! 0 1
//! 2 3
//! ```
//!
//! Lines starting with `#` are comments. A `# nodes=N` comment (as written by
//! [`save_edge_list`]) declares ids `0..N` so isolated nodes survive a round trip.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::adjacency::{AdjacencyMatrix, Directedness};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct EdgeList {
    pub adjacency: AdjacencyMatrix,
    /// Original id of each dense node index.
    pub node_ids: Vec<u64>,
    /// Edge lines read, before dropping loops and duplicates.
    pub raw_edges: usize,
    pub self_loops: usize,
}

fn declared_nodes(comment: &str) -> Option<usize> {
    comment
        .trim_start_matches('#')
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix("nodes="))
        .and_then(|v| v.parse().ok())
}

pub fn read_edge_list<R: BufRead>(reader: R, directedness: Directedness, origin: &Path) -> Result<EdgeList> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        msg,
    };
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    let mut ids = BTreeSet::new();
    let mut declared = None;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(format!("reading {}", origin.display()), e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            if declared.is_none() {
                declared = declared_nodes(trimmed);
            }
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(parse_err(lineno, format!("expected two node ids, found {trimmed:?}")));
        };
        let u: u64 = a
            .parse()
            .map_err(|_| parse_err(lineno, format!("invalid node id {a:?}")))?;
        let v: u64 = b
            .parse()
            .map_err(|_| parse_err(lineno, format!("invalid node id {b:?}")))?;
        ids.insert(u);
        ids.insert(v);
        pairs.push((u, v));
    }
    if let Some(n) = declared {
        ids.extend(0..n as u64);
    }
    if ids.is_empty() {
        return Err(Error::param(format!("{} contains no edges", origin.display())));
    }

    let node_ids: Vec<u64> = ids.into_iter().collect();
    let index = |id: u64| node_ids.binary_search(&id).expect("id collected above");
    let self_loops = pairs.iter().filter(|(u, v)| u == v).count();
    let raw_edges = pairs.len();
    let adjacency = AdjacencyMatrix::from_edges(
        node_ids.len(),
        directedness,
        pairs.iter().map(|&(u, v)| (index(u), index(v))),
    )?;
    Ok(EdgeList {
        adjacency,
        node_ids,
        raw_edges,
        self_loops,
    })
}

pub fn load_edge_list(path: &Path, directedness: Directedness) -> Result<EdgeList> {
    let file = fs::File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    read_edge_list(BufReader::new(file), directedness, path)
}

pub fn format_edge_list(a: &AdjacencyMatrix) -> String {
    let edges = a.edges();
    let mut out = String::with_capacity(edges.len() * 12 + 32);
    let _ = writeln!(out, "# nodes={} edges={}", a.n_nodes(), edges.len());
    for (i, j) in edges {
        let _ = writeln!(out, "{i} {j}");
    }
    out
}

pub fn save_edge_list(path: &Path, a: &AdjacencyMatrix) -> Result<()> {
    fs::write(path, format_edge_list(a)).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}
