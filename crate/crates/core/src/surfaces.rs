//! Orientable rotation systems: face tracing, genus, and the classification
//! of all rotation systems of `K₅` up to relabelling (and optionally
//! orientation reversal).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphlab::Graph;
use crate::perms::all_permutations;

/// A cyclic order of the neighbours at every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RotationSystem {
    rotation: Vec<Vec<usize>>,
}

/// Directed edge `(tail, head)`.
pub type Dart = (usize, usize);

impl RotationSystem {
    /// Each row lists the neighbours of a vertex in cyclic order; adjacency
    /// must be symmetric and loop-free.
    pub fn new(rotation: Vec<Vec<usize>>) -> Result<Self> {
        let n = rotation.len();
        for (v, row) in rotation.iter().enumerate() {
            let mut sorted = row.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("vertex {v} lists a neighbour twice")));
            }
            for &w in row {
                if w >= n || w == v {
                    return Err(Error::invalid(format!("vertex {v} has invalid neighbour {w}")));
                }
                if !rotation[w].contains(&v) {
                    return Err(Error::invalid(format!("{w} is a neighbour of {v} but not conversely")));
                }
            }
        }
        Ok(Self { rotation })
    }

    /// Rotation with each vertex's neighbours in increasing order.
    pub fn sorted(g: &Graph) -> Self {
        let mut rotation = g.neighbours();
        for row in &mut rotation {
            row.sort_unstable();
        }
        Self { rotation }
    }

    pub fn graph(&self) -> Graph {
        let edges = self
            .rotation
            .iter()
            .enumerate()
            .flat_map(|(v, row)| row.iter().filter(move |&&w| v < w).map(move |&w| (v, w)));
        Graph::new(self.rotation.len(), edges).expect("validated on construction")
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rotation.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    /// Every cyclic order reversed.
    pub fn reverse(&self) -> Self {
        Self {
            rotation: self
                .rotation
                .iter()
                .map(|row| row.iter().rev().copied().collect())
                .collect(),
        }
    }

    /// Vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut rotation = vec![Vec::new(); self.rotation.len()];
        for (v, row) in self.rotation.iter().enumerate() {
            rotation[perm[v]] = row.iter().map(|&w| perm[w]).collect();
        }
        Self { rotation }
    }

    /// Each cyclic order rotated to start at its smallest neighbour.
    pub fn normalized(&self) -> Self {
        Self {
            rotation: self
                .rotation
                .iter()
                .map(|row| {
                    let start = row.iter().enumerate().min_by_key(|&(_, &w)| w).map_or(0, |(i, _)| i);
                    row[start..].iter().chain(&row[..start]).copied().collect()
                })
                .collect(),
        }
    }

    fn is_connected(&self) -> bool {
        let n = self.rotation.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.rotation[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

impl fmt::Display for RotationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rotation {
            let parts: Vec<String> = row.iter().map(usize::to_string).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for RotationSystem {
    type Err = Error;

    /// Line `v` holds the cyclic neighbour list of vertex `v`.
    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .lines()
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse().map_err(|e| Error::parse(format!("{t:?}: {e}"))))
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        RotationSystem::new(rows)
    }
}

/// Face boundary walks. The dart after `(u, v)` is `(v, w)`, where `w`
/// follows `u` in the rotation at `v`.
pub fn trace_faces(rs: &RotationSystem) -> Result<Vec<Vec<Dart>>> {
    if !rs.is_connected() {
        return Err(Error::invalid("face tracing needs a connected graph"));
    }
    if rs.edge_count() == 0 {
        return Ok(vec![Vec::new()]);
    }
    let n = rs.vertex_count();
    // position of each neighbour in each rotation
    let mut pos = vec![vec![usize::MAX; n]; n];
    for (v, row) in rs.rotation.iter().enumerate() {
        for (i, &w) in row.iter().enumerate() {
            pos[v][w] = i;
        }
    }
    let mut used = vec![vec![false; n]; n];
    let mut faces = Vec::new();
    for u in 0..n {
        for &v in &rs.rotation[u] {
            if used[u][v] {
                continue;
            }
            let mut face = Vec::new();
            let (mut a, mut b) = (u, v);
            while !used[a][b] {
                used[a][b] = true;
                face.push((a, b));
                let row = &rs.rotation[b];
                let w = row[(pos[b][a] + 1) % row.len()];
                (a, b) = (b, w);
            }
            faces.push(face);
        }
    }
    Ok(faces)
}

/// `(2 - V + E - F) / 2`.
pub fn genus(rs: &RotationSystem) -> Result<u32> {
    let f = trace_faces(rs)?.len() as i64;
    let (v, e) = (rs.vertex_count() as i64, rs.edge_count() as i64);
    let twice = 2 - v + e - f;
    assert!(
        twice >= 0 && twice % 2 == 0,
        "orientable face tracing gave a non-integral genus"
    );
    Ok((twice / 2) as u32)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingClass {
    pub representative: String,
    pub genus: u32,
    pub orbit_size: usize,
    pub face_lengths: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct K5Classification {
    pub target_genus: u32,
    pub total_systems: usize,
    pub genus_distribution: BTreeMap<u32, usize>,
    pub min_genus: u32,
    pub max_genus: u32,
    /// Classes under relabelling only.
    pub classes_relabelling: Vec<EmbeddingClass>,
    /// Classes under relabelling combined with orientation reversal.
    pub classes_with_reversal: Vec<EmbeddingClass>,
}

const K5: usize = 5;
/// Cyclic orders of 4 neighbours.
const CYCLIC_ORDERS: usize = 6;

/// The `CYCLIC_ORDERS` cyclic orders of `others`, each starting at its
/// smallest element.
fn cyclic_orders(others: &[usize]) -> Vec<Vec<usize>> {
    let first = others[0];
    let rest = &others[1..];
    all_permutations(rest.len())
        .into_iter()
        .map(|p| {
            let mut row = vec![first];
            row.extend(p.entries().iter().map(|&i| rest[i as usize - 1]));
            row
        })
        .collect()
}

struct K5Systems {
    orders: Vec<Vec<Vec<usize>>>,
}

impl K5Systems {
    fn new() -> Self {
        let orders = (0..K5)
            .map(|v| cyclic_orders(&(0..K5).filter(|&w| w != v).collect::<Vec<_>>()))
            .collect();
        Self { orders }
    }

    fn system(&self, id: usize) -> RotationSystem {
        let mut rest = id;
        let rotation = (0..K5)
            .map(|v| {
                let d = rest % CYCLIC_ORDERS;
                rest /= CYCLIC_ORDERS;
                self.orders[v][d].clone()
            })
            .collect();
        RotationSystem { rotation }
    }

    fn id(&self, rs: &RotationSystem) -> usize {
        let normal = rs.normalized();
        (0..K5).rev().fold(0, |acc, v| {
            let d = self.orders[v]
                .iter()
                .position(|o| *o == normal.rotation[v])
                .expect("K5 rotation");
            acc * CYCLIC_ORDERS + d
        })
    }
}

/// Enumerates all `6⁵ = 7776` rotation systems of `K₅` and groups those of
/// `target_genus` into orbits under the 120 relabellings, with and without
/// global orientation reversal.
pub fn classify_k5(target_genus: u32) -> K5Classification {
    let systems = K5Systems::new();
    let total = CYCLIC_ORDERS.pow(K5 as u32);
    let genera: Vec<u32> = (0..total)
        .into_par_iter()
        .map(|id| genus(&systems.system(id)).expect("K5 is connected"))
        .collect();
    let mut genus_distribution = BTreeMap::new();
    for &g in &genera {
        *genus_distribution.entry(g).or_insert(0) += 1;
    }
    let perms: Vec<Vec<usize>> = all_permutations(K5)
        .iter()
        .map(|p| p.entries().iter().map(|&x| x as usize - 1).collect())
        .collect();
    let orbits = |with_reversal: bool| -> Vec<EmbeddingClass> {
        let mut class_of = vec![usize::MAX; total];
        let mut classes = Vec::new();
        for id in 0..total {
            if genera[id] != target_genus || class_of[id] != usize::MAX {
                continue;
            }
            let rs = systems.system(id);
            let mut size = 0;
            let images = perms.iter().flat_map(|p| {
                let r = rs.relabel(p);
                let rev = with_reversal.then(|| r.reverse());
                std::iter::once(r).chain(rev)
            });
            for image in images {
                let j = systems.id(&image);
                if class_of[j] == usize::MAX {
                    class_of[j] = classes.len();
                    size += 1;
                }
            }
            let mut face_lengths: Vec<usize> = trace_faces(&rs).expect("connected").iter().map(Vec::len).collect();
            face_lengths.sort_unstable();
            classes.push(EmbeddingClass {
                representative: rs.to_string(),
                genus: target_genus,
                orbit_size: size,
                face_lengths,
            });
        }
        classes
    };
    K5Classification {
        target_genus,
        total_systems: total,
        min_genus: *genus_distribution.keys().next().expect("nonempty"),
        max_genus: *genus_distribution.keys().next_back().expect("nonempty"),
        genus_distribution,
        classes_relabelling: orbits(false),
        classes_with_reversal: orbits(true),
    }
}
