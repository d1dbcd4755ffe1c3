//! Bipartite graphs with sides `A = 0..left` and `B = left..n`: the set
//! `N̂(D)` of vertices with two neighbours in `D`, and the search for a cycle
//! of length `2|A|` under the hypothesis `|N̂(D)| >= |D|` for `|D| >= 2`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

pub const MAX_CYCLE_SIDE: usize = 12;
/// B-vertices with at least two neighbours in `A` are tracked in a `u64`.
const MAX_USEFUL_B: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteGraph {
    left: usize,
    graph: Graph,
}

impl BipartiteGraph {
    pub fn new(left: usize, graph: Graph) -> Result<Self> {
        if left > graph.vertex_count() {
            return Err(Error::invalid("side A larger than the vertex set"));
        }
        if let Some(&(u, v)) = graph.edges().iter().find(|&&(u, v)| (u < left) == (v < left)) {
            return Err(Error::invalid(format!("edge ({u}, {v}) does not cross the bipartition")));
        }
        Ok(Self { left, graph })
    }

    /// `K_{a,b}` with `A = 0..a`.
    pub fn complete(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Self::new(a, Graph::new(a + b, edges).expect("simple")).expect("bipartite")
    }

    /// The even cycle `a_0 b_0 a_1 b_1 ...` with `A` the even positions.
    pub fn even_cycle(half: usize) -> Result<Self> {
        if half < 2 {
            return Err(Error::invalid("an even cycle needs at least 4 vertices"));
        }
        let edges = (0..half).flat_map(|i| [(i, half + i), ((i + 1) % half, half + i)]);
        Self::new(half, Graph::new(2 * half, edges)?)
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

impl fmt::Display for BipartiteGraph {
    /// `n m a` header, then `u v` lines; `A = 0..a`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.graph.vertex_count(), self.graph.edge_count(), self.left)?;
        for (u, v) in self.graph.edges() {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for BipartiteGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (header, edges) = Graph::parse_edge_list(s)?;
        let left = *header
            .get(2)
            .ok_or_else(|| Error::parse("bipartite header must be \"n m a\""))?;
        BipartiteGraph::new(left, Graph::new(header[0], edges)?)
    }
}

/// `{v : |N(v) ∩ D| >= 2}` for `D ⊆ A`.
pub fn hat_n(g: &BipartiteGraph, d: &[usize]) -> Result<Vec<usize>> {
    if let Some(&x) = d.iter().find(|&&x| x >= g.left) {
        return Err(Error::invalid(format!("vertex {x} of D is not in side A")));
    }
    let in_d: HashSet<usize> = d.iter().copied().collect();
    let mut hits = vec![0usize; g.graph.vertex_count()];
    for &(u, v) in g.graph.edges() {
        if in_d.contains(&u) {
            hits[v] += 1;
        }
    }
    Ok((0..hits.len()).filter(|&v| hits[v] >= 2).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum CycleVerdict {
    /// Some `D ⊆ A`, `|D| >= 2`, has `|N̂(D)| < |D|`.
    HypothesisFails { d: Vec<usize>, hat: Vec<usize> },
    /// Vertices of a cycle of length `2|A|`, starting at `A`-vertex 0.
    ConjectureHolds { cycle: Vec<usize> },
    /// The hypothesis holds but no cycle of length `2|A|` exists.
    Counterexample { left: usize, graph: String },
}

pub fn bipartite_cycle_check(g: &BipartiteGraph) -> Result<CycleVerdict> {
    let a = g.left;
    if a > MAX_CYCLE_SIDE {
        return Err(Error::CapExceeded {
            what: "bipartite cycle side |A|",
            requested: a as u128,
            cap: MAX_CYCLE_SIDE as u128,
        });
    }
    if a < 2 {
        return Err(Error::invalid("the cycle check needs |A| >= 2"));
    }
    let adj = g.graph.neighbours();
    // smallest failing D by size, then lexicographically
    let mut masks: Vec<u32> = (1u32..1 << a).filter(|m| m.count_ones() >= 2).collect();
    masks.sort_by_key(|&m| (m.count_ones(), (0..a).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>()));
    for mask in masks {
        let d: Vec<usize> = (0..a).filter(|&i| mask >> i & 1 == 1).collect();
        let hat = hat_n(g, &d)?;
        if hat.len() < d.len() {
            return Ok(CycleVerdict::HypothesisFails { d, hat });
        }
    }
    let useful: Vec<usize> = (a..g.graph.vertex_count()).filter(|&b| adj[b].len() >= 2).collect();
    if useful.len() > MAX_USEFUL_B {
        return Err(Error::CapExceeded {
            what: "bipartite cycle side |B| (vertices of degree >= 2)",
            requested: useful.len() as u128,
            cap: MAX_USEFUL_B as u128,
        });
    }
    // a_nbrs[i]: bitmask over `useful` of B-neighbours of A-vertex i
    let mut a_nbrs = vec![0u64; a];
    for (j, &b) in useful.iter().enumerate() {
        for &x in &adj[b] {
            a_nbrs[x] |= 1 << j;
        }
    }
    let mut search = CycleSearch {
        a,
        a_nbrs: &a_nbrs,
        failed: HashSet::new(),
        path: vec![],
    };
    if search.extend(1, 0, 0) {
        let mut cycle = Vec::with_capacity(2 * a);
        cycle.push(0);
        for &(b, x) in &search.path {
            cycle.push(useful[b]);
            if x != 0 {
                cycle.push(x);
            }
        }
        return Ok(CycleVerdict::ConjectureHolds { cycle });
    }
    Ok(CycleVerdict::Counterexample {
        left: a,
        graph: g.to_string(),
    })
}

struct CycleSearch<'a> {
    a: usize,
    a_nbrs: &'a [u64],
    /// `(used A, used B, current A)` states known not to close a cycle.
    failed: HashSet<(u32, u64, usize)>,
    /// `(B index, next A-vertex)` steps taken from vertex 0.
    path: Vec<(usize, usize)>,
}

impl CycleSearch<'_> {
    fn extend(&mut self, used_a: u32, used_b: u64, current: usize) -> bool {
        let full = (1u32 << self.a) - 1;
        if used_a == full {
            let closing = self.a_nbrs[current] & self.a_nbrs[0] & !used_b;
            if closing != 0 {
                self.path.push((closing.trailing_zeros() as usize, 0));
                return true;
            }
            return false;
        }
        if self.failed.contains(&(used_a, used_b, current)) {
            return false;
        }
        let mut bs = self.a_nbrs[current] & !used_b;
        while bs != 0 {
            let b = bs.trailing_zeros() as usize;
            bs &= bs - 1;
            for next in 1..self.a {
                if used_a >> next & 1 == 0 && self.a_nbrs[next] >> b & 1 == 1 {
                    self.path.push((b, next));
                    if self.extend(used_a | 1 << next, used_b | 1 << b, next) {
                        return true;
                    }
                    self.path.pop();
                }
            }
        }
        self.failed.insert((used_a, used_b, current));
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hat_examples() {
        let k22 = BipartiteGraph::complete(2, 2);
        assert_eq!(hat_n(&k22, &[0, 1]).unwrap(), vec![2, 3]);
        let c6 = BipartiteGraph::even_cycle(3).unwrap();
        assert_eq!(hat_n(&c6, &[0, 1]).unwrap().len(), 1);
        assert!(hat_n(&c6, &[0]).unwrap().is_empty());
        assert!(hat_n(&c6, &[4]).is_err());
    }

    #[test]
    fn verdicts() {
        match bipartite_cycle_check(&BipartiteGraph::complete(2, 2)).unwrap() {
            CycleVerdict::ConjectureHolds { cycle } => assert_eq!(cycle.len(), 4),
            v => panic!("{v:?}"),
        }
        assert!(matches!(
            bipartite_cycle_check(&BipartiteGraph::even_cycle(3).unwrap()).unwrap(),
            CycleVerdict::HypothesisFails { .. }
        ));
        match bipartite_cycle_check(&BipartiteGraph::complete(5, 6)).unwrap() {
            CycleVerdict::ConjectureHolds { cycle } => {
                assert_eq!(cycle.len(), 10);
                let distinct: HashSet<_> = cycle.iter().collect();
                assert_eq!(distinct.len(), 10);
                for i in 0..10 {
                    let (u, v) = (cycle[i], cycle[(i + 1) % 10]);
                    assert!((u < 5) != (v < 5));
                }
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn text_round_trip() {
        let g = BipartiteGraph::even_cycle(4).unwrap();
        assert_eq!(g.to_string().parse::<BipartiteGraph>().unwrap(), g);
        assert!("4 1 2\n0 1\n".parse::<BipartiteGraph>().is_err());
    }
}
