use serde_json::json;
use workbench_core::graphlab::{
    bipartite_cycle_check, colours_z_with_cap, equivalence_probe, flip_search, flip_verify, hall_condition,
    in_degrees, infimum_probe, orientation_exists, partial_sum, BipartiteGraph, ColourBudget, CycleVerdict,
    FlipColouring, Graph, NeighbourhoodMode,
};

use super::{parse_input, read_input};
use crate::args::{GraphsCmd, NeighbourhoodArg};
use crate::error::CliResult;
use crate::report::{Experiment, Verdict};

fn mode(m: NeighbourhoodArg) -> NeighbourhoodMode {
    match m {
        NeighbourhoodArg::Induced => NeighbourhoodMode::Induced,
        NeighbourhoodArg::Incident => NeighbourhoodMode::Incident,
    }
}

pub fn run(cmd: &GraphsCmd, seed: u64) -> CliResult<Experiment> {
    Ok(match cmd {
        GraphsCmd::ColoursZ { set, cap } => {
            let s = ColourBudget::new(set.iter().copied())?;
            let r = colours_z_with_cap(&s, *cap)?;
            let ps = partial_sum(&s);
            let reason = if r.colours {
                format!("the cooldown-state graph has a cycle of length {}", r.certificate.as_ref().map_or(0, Vec::len))
            } else {
                "no cycle is reachable from the all-free cooldown state".to_owned()
            };
            Experiment::new(
                "graphs.colours-z",
                json!({
                    "set": s,
                    "colours": r.colours,
                    "certificate": r.certificate,
                    "period": r.certificate.as_ref().map(Vec::len),
                    "partial_sum": ps.to_string(),
                    "states_visited": r.states_visited,
                    "reason": reason,
                }),
                if r.colours { Verdict::Verified } else { Verdict::RefutedInstance },
            )
            .param("set", &s)
        }
        GraphsCmd::Infimum { samples, visit_budget } => {
            let r = infimum_probe(*samples, *visit_budget, seed);
            Experiment::new("graphs.infimum", &r, Verdict::ReportOnly)
                .param("samples", samples)
                .param("visit_budget", visit_budget)
        }
        GraphsCmd::Hall { input, lambda } => {
            let g: Graph = parse_input(input)?;
            let r = hall_condition(&g, lambda)?;
            Experiment::new("graphs.hall", &r, Verdict::ReportOnly)
                .param("input", input)
                .param("lambda", lambda)
        }
        GraphsCmd::Orient { input, lambda } => {
            let g: Graph = parse_input(input)?;
            let r = orientation_exists(&g, lambda)?;
            let indeg = r.orientation.as_ref().map(|arcs| in_degrees(g.vertex_count(), arcs));
            Experiment::new(
                "graphs.orient",
                json!({ "exists": r.exists, "orientation": r.orientation, "in_degrees": indeg, "max_flow": r.max_flow }),
                if r.exists { Verdict::Found } else { Verdict::NotFound },
            )
            .param("input", input)
            .param("lambda", lambda)
        }
        GraphsCmd::Equivalence { instances, max_n } => {
            let r = equivalence_probe(*instances, *max_n, seed)?;
            let verdict = if r.failures.is_empty() { Verdict::Verified } else { Verdict::Refuted };
            Experiment::new("graphs.equivalence", &r, verdict)
                .param("instances", instances)
                .param("max_n", max_n)
        }
        GraphsCmd::BipartiteCycle { input } => {
            let g: BipartiteGraph = parse_input(input)?;
            let v = bipartite_cycle_check(&g)?;
            let verdict = match &v {
                CycleVerdict::HypothesisFails { .. } => Verdict::RefutedInstance,
                CycleVerdict::ConjectureHolds { .. } => Verdict::Verified,
                CycleVerdict::Counterexample { .. } => Verdict::Refuted,
            };
            Experiment::new("graphs.bipartite-cycle", &v, verdict).param("input", input)
        }
        GraphsCmd::FlipVerify { input, mode: m } => {
            let fc: FlipColouring = serde_json::from_str(&read_input(input)?)?;
            let r = flip_verify(&fc, mode(*m))?;
            Experiment::new(
                "graphs.flip-verify",
                &r,
                if r.holds { Verdict::Verified } else { Verdict::RefutedInstance },
            )
            .param("input", input)
            .param("mode", mode(*m))
        }
        GraphsCmd::FlipSearch { n, a, budget, mode: m } => {
            let r = flip_search(*n, a, mode(*m), *budget, seed)?;
            Experiment::new(
                "graphs.flip-search",
                &r,
                if r.found.is_some() { Verdict::Found } else { Verdict::NotFound },
            )
            .param("n", n)
            .param("a", a)
            .param("budget", budget)
            .param("mode", mode(*m))
        }
    })
}
