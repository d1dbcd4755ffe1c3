//! Orientations with bounded in-degree and the subset condition
//! `Σ_{v∈A} λ(v) >= |E(G[A])|` that characterizes them.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::flow::FlowNetwork;
use super::Graph;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded};

pub const MAX_HALL_VERTICES: usize = 24;

fn validate_lambda(g: &Graph, lambda: &[usize]) -> Result<()> {
    if lambda.len() != g.vertex_count() {
        return Err(Error::invalid(format!(
            "λ has {} entries for {} vertices",
            lambda.len(),
            g.vertex_count()
        )));
    }
    let deg = g.degrees();
    if let Some(v) = (0..lambda.len()).find(|&v| lambda[v] > deg[v]) {
        return Err(Error::invalid(format!("λ({v}) = {} exceeds deg({v}) = {}", lambda[v], deg[v])));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HallReport {
    pub holds: bool,
    /// Smallest violating vertex set, by size then lexicographically.
    pub violating: Option<Vec<usize>>,
}

/// Exhaustive check over all `2^|V|` vertex subsets.
pub fn hall_condition(g: &Graph, lambda: &[usize]) -> Result<HallReport> {
    validate_lambda(g, lambda)?;
    let n = g.vertex_count();
    if n > MAX_HALL_VERTICES {
        return Err(Error::CapExceeded {
            what: "subset-condition vertex count",
            requested: n as u128,
            cap: MAX_HALL_VERTICES as u128,
        });
    }
    let mut adj = vec![0u32; n];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let key = |mask: u32| -> (u32, Vec<usize>) {
        (mask.count_ones(), (0..n).filter(|&v| mask >> v & 1 == 1).collect())
    };
    let worst = (0u32..1 << n)
        .into_par_iter()
        .filter(|&mask| {
            let mut internal2 = 0usize;
            let mut budget = 0usize;
            for v in 0..n {
                if mask >> v & 1 == 1 {
                    internal2 += (adj[v] & mask).count_ones() as usize;
                    budget += lambda[v];
                }
            }
            budget < internal2 / 2
        })
        .map(key)
        .min();
    Ok(HallReport {
        holds: worst.is_none(),
        violating: worst.map(|(_, set)| set),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientationReport {
    pub exists: bool,
    /// `(tail, head)` per edge, in the graph's edge order.
    pub orientation: Option<Vec<(usize, usize)>>,
    pub max_flow: usize,
}

/// Flow network: source → edge node (1), edge node → both endpoints (1),
/// vertex → sink (`λ(v)`). An orientation exists iff the flow is `|E|`; each
/// edge points at the endpoint its unit of flow reaches.
pub fn orientation_exists(g: &Graph, lambda: &[usize]) -> Result<OrientationReport> {
    validate_lambda(g, lambda)?;
    let (n, m) = (g.vertex_count(), g.edge_count());
    let (source, sink) = (0, 1);
    let edge_node = |e: usize| 2 + e;
    let vertex_node = |v: usize| 2 + m + v;
    let mut net = FlowNetwork::new(2 + m + n);
    let mut arcs = Vec::with_capacity(m);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        net.add_arc(source, edge_node(e), 1);
        let to_u = net.add_arc(edge_node(e), vertex_node(u), 1);
        let to_v = net.add_arc(edge_node(e), vertex_node(v), 1);
        arcs.push((to_u, to_v));
    }
    for (v, &l) in lambda.iter().enumerate() {
        net.add_arc(vertex_node(v), sink, l as i64);
    }
    let flow = net.max_flow(source, sink) as usize;
    let exists = flow == m;
    let orientation = exists.then(|| {
        g.edges()
            .iter()
            .zip(&arcs)
            .map(|(&(u, v), &(to_u, _))| if net.flow(to_u) == 1 { (v, u) } else { (u, v) })
            .collect()
    });
    Ok(OrientationReport {
        exists,
        orientation,
        max_flow: flow,
    })
}

/// In-degrees of an orientation given as `(tail, head)` arcs.
pub fn in_degrees(n: usize, arcs: &[(usize, usize)]) -> Vec<usize> {
    let mut d = vec![0; n];
    for &(_, h) in arcs {
        d[h] += 1;
    }
    d
}

/// One random instance where the two tests disagree, or where the returned
/// orientation breaks a bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceFailure {
    pub instance: usize,
    pub graph: String,
    pub lambda: Vec<usize>,
    pub hall: bool,
    pub flow: bool,
    pub orientation_valid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub instances: usize,
    pub orientable: usize,
    pub failures: Vec<EquivalenceFailure>,
}

/// Random `G(n, 1/2)` with `n` uniform in `2..=max_n` and `λ(v)` uniform in
/// `0..=deg(v)`; instance `i` uses `derive_seed(seed, i)`.
pub fn random_instance(max_n: usize, seed: u64) -> (Graph, Vec<usize>) {
    let mut rng = seeded(seed);
    let n = rng.gen_range(2..=max_n.max(2));
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::new(n, edges).expect("simple by construction");
    let lambda = g.degrees().into_iter().map(|d| rng.gen_range(0..=d)).collect();
    (g, lambda)
}

/// Runs both tests on `instances` random instances and checks every returned
/// orientation edge by edge and against `λ`.
pub fn equivalence_probe(instances: usize, max_n: usize, seed: u64) -> Result<EquivalenceReport> {
    if max_n > MAX_HALL_VERTICES {
        return Err(Error::CapExceeded {
            what: "equivalence probe vertices",
            requested: max_n as u128,
            cap: MAX_HALL_VERTICES as u128,
        });
    }
    let outcomes: Vec<(bool, Option<EquivalenceFailure>)> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let (g, lambda) = random_instance(max_n, derive_seed(seed, i as u64));
            let hall = hall_condition(&g, &lambda)?.holds;
            let flow = orientation_exists(&g, &lambda)?;
            let orientation_valid = flow.orientation.as_ref().is_none_or(|arcs| {
                arcs.len() == g.edge_count()
                    && g.edges().iter().zip(arcs).all(|(&(u, v), &a)| a == (u, v) || a == (v, u))
                    && in_degrees(g.vertex_count(), arcs).iter().zip(&lambda).all(|(d, l)| d <= l)
            });
            let failure = (hall != flow.exists || !orientation_valid).then(|| EquivalenceFailure {
                instance: i,
                graph: g.to_string(),
                lambda: lambda.clone(),
                hall,
                flow: flow.exists,
                orientation_valid,
            });
            Ok((flow.exists, failure))
        })
        .collect::<Result<_>>()?;
    Ok(EquivalenceReport {
        instances,
        orientable: outcomes.iter().filter(|(e, _)| *e).count(),
        failures: outcomes.into_iter().filter_map(|(_, f)| f).collect(),
    })
}
