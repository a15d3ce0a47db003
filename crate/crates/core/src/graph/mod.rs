//! Undirected simple graphs and the lattice / fractal families they are
//! built from.
//!
//! A [`Graph`] is immutable after construction. Every generator returns a
//! connected graph; [`Graph::new`] rejects disconnected edge sets unless
//! explicitly allowed.

mod generators;
mod io;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use generators::{
    make_chain, make_complete, make_hanoi, make_hexagonal_lattice, make_sierpinski,
    make_square_lattice, make_star, make_triangular_lattice, make_vicsek,
};
pub use io::{load_graph, parse_graph, save_graph, write_graph, LoadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Chain,
    SquareLattice,
    TriangularLattice,
    HexagonalLattice,
    SierpinskiGasket,
    HanoiDual,
    Vicsek,
    Star,
    Complete,
    Custom,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Chain,
        Family::SquareLattice,
        Family::TriangularLattice,
        Family::HexagonalLattice,
        Family::SierpinskiGasket,
        Family::HanoiDual,
        Family::Vicsek,
        Family::Star,
        Family::Complete,
        Family::Custom,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Chain => "chain",
            Family::SquareLattice => "square",
            Family::TriangularLattice => "triangular",
            Family::HexagonalLattice => "hexagonal",
            Family::SierpinskiGasket => "sierpinski",
            Family::HanoiDual => "hanoi",
            Family::Vicsek => "vicsek",
            Family::Star => "star",
            Family::Complete => "complete",
            Family::Custom => "custom",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|fam| fam.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParam(format!("unknown graph family '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Boundary {
    #[default]
    Open,
    Closed,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::Open => "open",
            Boundary::Closed => "closed",
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "open" => Ok(Boundary::Open),
            "closed" => Ok(Boundary::Closed),
            _ => Err(Error::InvalidParam(format!(
                "unknown boundary '{s}', expected open or closed"
            ))),
        }
    }
}

/// Provenance of a graph.
///
/// `level_or_extent` is the recursion level for fractals, the side `n` for
/// lattices and the node count for chains, stars and complete graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphMeta {
    pub family: Family,
    pub level_or_extent: usize,
    pub boundary: Boundary,
    /// Branching number, present iff `family == Vicsek`.
    pub nu: Option<usize>,
}

impl GraphMeta {
    pub fn new(family: Family, level_or_extent: usize, boundary: Boundary) -> Self {
        GraphMeta {
            family,
            level_or_extent,
            boundary,
            nu: None,
        }
    }

    pub fn custom() -> Self {
        GraphMeta::new(Family::Custom, 0, Boundary::Open)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_nodes: usize,
    /// Sorted, each pair stored as `(i, j)` with `i < j`.
    edges: Vec<(usize, usize)>,
    /// Sorted neighbour lists.
    adjacency: Vec<Vec<usize>>,
    meta: GraphMeta,
}

impl Graph {
    /// Builds a connected simple graph.
    pub fn new(num_nodes: usize, edges: Vec<(usize, usize)>, meta: GraphMeta) -> Result<Self> {
        let g = Self::new_unchecked_connectivity(num_nodes, edges, meta)?;
        g.check_connected()?;
        Ok(g)
    }

    /// Like [`Graph::new`] but accepts disconnected graphs.
    pub fn new_unchecked_connectivity(
        num_nodes: usize,
        edges: Vec<(usize, usize)>,
        meta: GraphMeta,
    ) -> Result<Self> {
        if num_nodes == 0 {
            return Err(Error::SizeTooSmall("graph needs at least one node".into()));
        }
        if (meta.family == Family::Vicsek) != meta.nu.is_some() {
            return Err(Error::InvalidParam(
                "nu must be set exactly for Vicsek graphs".into(),
            ));
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            for node in [a, b] {
                if node >= num_nodes {
                    return Err(Error::NodeOutOfRange { node, num_nodes });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adjacency = vec![Vec::new(); num_nodes];
        for &(a, b) in &normalized {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            num_nodes,
            edges: normalized,
            adjacency,
            meta,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.num_nodes && self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn meta(&self) -> &GraphMeta {
        &self.meta
    }

    pub fn with_meta(mut self, meta: GraphMeta) -> Self {
        self.meta = meta;
        self
    }

    /// Number of nodes reachable from node 0.
    pub fn reachable_from_zero(&self) -> usize {
        let mut seen = vec![false; self.num_nodes];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.reachable_from_zero() == self.num_nodes
    }

    pub fn check_connected(&self) -> Result<()> {
        let reached = self.reachable_from_zero();
        if reached == self.num_nodes {
            Ok(())
        } else {
            Err(Error::DisconnectedGraph {
                reached,
                total: self.num_nodes,
            })
        }
    }

    /// Returns the graph with node `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.num_nodes {
            return Err(Error::DimensionMismatch {
                expected: self.num_nodes,
                got: perm.len(),
            });
        }
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a], perm[b]))
            .collect();
        Graph::new_unchecked_connectivity(self.num_nodes, edges, self.meta.clone())
    }

    pub fn degree_histogram(&self) -> std::collections::BTreeMap<usize, usize> {
        let mut hist = std::collections::BTreeMap::new();
        for list in &self.adjacency {
            *hist.entry(list.len()).or_insert(0) += 1;
        }
        hist
    }
}
