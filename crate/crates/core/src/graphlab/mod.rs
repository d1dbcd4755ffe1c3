//! Small graph decision procedures: package colourings of the integers,
//! in-degree-bounded orientations, alternating cycles in bipartite graphs and
//! flip colourings.

mod bipartite;
mod flip;
mod flow;
mod orient;
mod packages;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bipartite::{bipartite_cycle_check, hat_n, BipartiteGraph, CycleVerdict, MAX_CYCLE_SIDE};
pub use flip::{flip_search, flip_verify, random_regular_graph, FlipColouring, FlipReport, FlipSearchResult, FlipViolation, NeighbourhoodMode};
pub use orient::{
    equivalence_probe, hall_condition, in_degrees, orientation_exists, random_instance, EquivalenceFailure, EquivalenceReport, HallReport,
    OrientationReport, MAX_HALL_VERTICES,
};
pub use packages::{
    certificate_is_valid, colours_z, colours_z_with_cap, infimum_probe, partial_sum, ColourBudget, InfimumReport, ProbeInstance, ZColouring,
    DEFAULT_STATE_CAP,
};

/// Simple undirected graph on `0..n`. Edges are stored once as `(u, v)` with
/// `u < v`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut es: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u}, {v}) has an endpoint outside 0..{n}")));
            }
            if u == v {
                return Err(Error::invalid(format!("loop at vertex {u}")));
            }
            es.push((u.min(v), u.max(v)));
        }
        es.sort_unstable();
        if let Some(w) = es.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("repeated edge {:?}", w[0])));
        }
        Ok(Self { n, edges: es })
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid("a cycle needs at least 3 vertices"));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::invalid("relabelling has the wrong length"));
        }
        Self::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    pub(crate) fn parse_edge_list(s: &str) -> Result<(Vec<usize>, Vec<(usize, usize)>)> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header: Vec<usize> = parse_numbers(lines.next().ok_or_else(|| Error::parse("missing header"))?)?;
        if header.len() < 2 {
            return Err(Error::parse("header must start with \"n m\""));
        }
        let mut edges = Vec::new();
        for line in lines {
            match parse_numbers(line)?.as_slice() {
                [u, v] => edges.push((*u, *v)),
                _ => return Err(Error::parse(format!("edge line {line:?} must hold two vertices"))),
            }
        }
        if edges.len() != header[1] {
            return Err(Error::parse(format!("header declares {} edges, found {}", header[1], edges.len())));
        }
        Ok((header, edges))
    }
}

fn parse_numbers(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse().map_err(|e| Error::parse(format!("{t:?}: {e}"))))
        .collect()
}

impl fmt::Display for Graph {
    /// `n m` header, then one `u v` line per edge.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.edges.len())?;
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (header, edges) = Graph::parse_edge_list(s)?;
        Graph::new(header[0], edges)
    }
}
