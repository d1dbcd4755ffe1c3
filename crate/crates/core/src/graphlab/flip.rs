//! Flip colourings: a `d`-regular graph with an edge colouring in `1..=k`
//! where colour `j` is `a_j`-regular and, at every vertex, the number of
//! colour-`j` edges in the closed neighbourhood strictly decreases in `j`.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};
use crate::rng::{seeded, WorkbenchRng};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipColouring {
    pub graph: Graph,
    /// Colour of each edge, in the graph's edge order.
    pub colours: Vec<u8>,
    /// Strictly increasing class degrees `a_1 < ... < a_k`.
    pub a: Vec<u32>,
}

/// Which edges count towards `e_j[v]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NeighbourhoodMode {
    /// Both endpoints in `N[v]`.
    #[default]
    Induced,
    /// At least one endpoint in `N[v]`.
    Incident,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum FlipViolation {
    ColourDegree {
        vertex: usize,
        colour: u8,
        expected: u32,
        actual: u32,
    },
    /// `e_{colour+1}[vertex] >= e_colour[vertex]`.
    LocalOrder {
        vertex: usize,
        colour: u8,
        counts: Vec<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipReport {
    pub holds: bool,
    pub violation: Option<FlipViolation>,
    pub mode: NeighbourhoodMode,
}

pub fn flip_verify(fc: &FlipColouring, mode: NeighbourhoodMode) -> Result<FlipReport> {
    let g = &fc.graph;
    let k = fc.a.len();
    if k == 0 || k > u8::MAX as usize {
        return Err(Error::invalid("the degree sequence a must have 1..=255 entries"));
    }
    if fc.a[0] == 0 || fc.a.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("a must be positive and strictly increasing"));
    }
    if fc.colours.len() != g.edge_count() {
        return Err(Error::invalid("one colour per edge is required"));
    }
    if let Some(&c) = fc.colours.iter().find(|&&c| c == 0 || c as usize > k) {
        return Err(Error::invalid(format!("colour {c} outside 1..={k}")));
    }
    let d: u32 = fc.a.iter().sum();
    if let Some((v, &deg)) = g.degrees().iter().enumerate().find(|&(_, &deg)| deg as u32 != d) {
        return Err(Error::invalid(format!("graph is not {d}-regular: deg({v}) = {deg}")));
    }
    let n = g.vertex_count();
    let mut class_deg = vec![vec![0u32; k]; n];
    for (&(u, v), &c) in g.edges().iter().zip(&fc.colours) {
        class_deg[u][c as usize - 1] += 1;
        class_deg[v][c as usize - 1] += 1;
    }
    for v in 0..n {
        for j in 0..k {
            if class_deg[v][j] != fc.a[j] {
                return Ok(FlipReport {
                    holds: false,
                    violation: Some(FlipViolation::ColourDegree {
                        vertex: v,
                        colour: j as u8 + 1,
                        expected: fc.a[j],
                        actual: class_deg[v][j],
                    }),
                    mode,
                });
            }
        }
    }
    let adj = g.neighbours();
    for v in 0..n {
        let mut closed = vec![false; n];
        closed[v] = true;
        for &w in &adj[v] {
            closed[w] = true;
        }
        let mut counts = vec![0u64; k];
        for (&(x, y), &c) in g.edges().iter().zip(&fc.colours) {
            let inside = match mode {
                NeighbourhoodMode::Induced => closed[x] && closed[y],
                NeighbourhoodMode::Incident => closed[x] || closed[y],
            };
            if inside {
                counts[c as usize - 1] += 1;
            }
        }
        if let Some(j) = (0..k - 1).find(|&j| counts[j + 1] >= counts[j]) {
            return Ok(FlipReport {
                holds: false,
                violation: Some(FlipViolation::LocalOrder {
                    vertex: v,
                    colour: j as u8 + 1,
                    counts,
                }),
                mode,
            });
        }
    }
    Ok(FlipReport {
        holds: true,
        violation: None,
        mode,
    })
}

/// Random simple `d`-regular graph by the pairing model with restarts; dense
/// degrees go through the complement.
pub fn random_regular_graph(n: usize, d: usize, rng: &mut WorkbenchRng) -> Result<Graph> {
    if d >= n || (n * d) % 2 == 1 {
        return Err(Error::invalid(format!("no simple {d}-regular graph on {n} vertices")));
    }
    if 2 * d > n - 1 {
        let sparse = random_regular_graph(n, n - 1 - d, rng)?;
        let present: std::collections::HashSet<(usize, usize)> = sparse.edges().iter().copied().collect();
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        return Graph::new(n, edges.filter(|e| !present.contains(e)));
    }
    const ATTEMPTS: usize = 10_000;
    for _ in 0..ATTEMPTS {
        let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        points.shuffle(rng);
        let edges: Vec<(usize, usize)> = points.chunks(2).map(|p| (p[0], p[1])).collect();
        if let Ok(g) = Graph::new(n, edges) {
            return Ok(g);
        }
    }
    Err(Error::invalid(format!(
        "pairing model found no simple {d}-regular graph on {n} vertices in {ATTEMPTS} attempts"
    )))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipSearchResult {
    pub found: Option<FlipColouring>,
    pub graphs_tried: u64,
    pub colourings_checked: u64,
}

/// Best-effort randomized search: random `Σa`-regular graphs on `n` vertices,
/// each decomposed into classes of degree `a_j` by randomized backtracking,
/// then checked with `flip_verify`. `budget` bounds both the colourings
/// checked and the graphs drawn.
pub fn flip_search(n: usize, a: &[u32], mode: NeighbourhoodMode, budget: u64, seed: u64) -> Result<FlipSearchResult> {
    let d: u32 = a.iter().sum();
    let mut rng = seeded(seed);
    let mut out = FlipSearchResult {
        found: None,
        graphs_tried: 0,
        colourings_checked: 0,
    };
    const COLOURINGS_PER_GRAPH: u64 = 8;
    while out.colourings_checked < budget && out.graphs_tried < budget {
        let g = random_regular_graph(n, d as usize, &mut rng)?;
        out.graphs_tried += 1;
        for _ in 0..COLOURINGS_PER_GRAPH {
            if out.colourings_checked >= budget {
                break;
            }
            let Some(colours) = decompose(&g, a, &mut rng) else {
                break;
            };
            out.colourings_checked += 1;
            let fc = FlipColouring {
                graph: g.clone(),
                colours,
                a: a.to_vec(),
            };
            if flip_verify(&fc, mode)?.holds {
                out.found = Some(fc);
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// Colours edges so that class `j` is `a_j`-regular, trying colours in a
/// random order per edge; gives up after a fixed number of backtracks.
fn decompose(g: &Graph, a: &[u32], rng: &mut WorkbenchRng) -> Option<Vec<u8>> {
    let k = a.len();
    let mut remaining: Vec<Vec<u32>> = vec![a.to_vec(); g.vertex_count()];
    let mut colours = vec![0u8; g.edge_count()];
    let orders: Vec<Vec<usize>> = (0..g.edge_count())
        .map(|_| {
            let mut o: Vec<usize> = (0..k).collect();
            o.shuffle(rng);
            o
        })
        .collect();
    let mut steps = 0u64;
    let limit = 20_000 + rng.gen_range(0..1000);
    fn go(
        e: usize,
        g: &Graph,
        orders: &[Vec<usize>],
        remaining: &mut [Vec<u32>],
        colours: &mut [u8],
        steps: &mut u64,
        limit: u64,
    ) -> bool {
        if e == colours.len() {
            return true;
        }
        *steps += 1;
        if *steps > limit {
            return false;
        }
        let (u, v) = g.edges()[e];
        for &j in &orders[e] {
            if remaining[u][j] > 0 && remaining[v][j] > 0 {
                remaining[u][j] -= 1;
                remaining[v][j] -= 1;
                colours[e] = j as u8 + 1;
                if go(e + 1, g, orders, remaining, colours, steps, limit) {
                    return true;
                }
                remaining[u][j] += 1;
                remaining[v][j] += 1;
            }
        }
        false
    }
    go(0, g, &orders, &mut remaining, &mut colours, &mut steps, limit).then_some(colours)
}
