use serde_json::json;
use workbench_core::capset::{check, find_disjoint_equal, max_capset, product, CapSet};

use super::parse_input;
use crate::args::CapsetCmd;
use crate::error::CliResult;
use crate::report::{Experiment, Verdict};

fn points(c: &CapSet) -> Vec<String> {
    c.points.iter().map(ToString::to_string).collect()
}

pub fn run(cmd: &CapsetCmd, seed: u64) -> CliResult<Experiment> {
    Ok(match cmd {
        CapsetCmd::Check { input } => {
            let set: CapSet = parse_input(input)?;
            let r = check(&set);
            Experiment::new(
                "capset.check",
                json!({ "n": set.n, "size": set.len(), "is_cap": r.is_cap, "violation": r.violation }),
                if r.is_cap { Verdict::Verified } else { Verdict::RefutedInstance },
            )
            .param("input", input)
        }
        CapsetCmd::Max { n } => {
            let r = max_capset(*n)?;
            Experiment::new(
                "capset.max",
                json!({ "n": r.n, "size": r.size, "witness": points(&r.witness) }),
                Verdict::ReportOnly,
            )
            .param("n", n)
        }
        CapsetCmd::Disjoint { n, size, budget } => {
            let r = find_disjoint_equal(*n, *size, *budget, seed)?;
            let verdict = if r.found.is_some() { Verdict::Found } else { Verdict::NotFound };
            Experiment::new(
                "capset.disjoint",
                json!({
                    "n": r.n,
                    "size": r.size,
                    "found": r.found.is_some(),
                    "first": r.found.as_ref().map(|p| points(&p.first)),
                    "second": r.found.as_ref().map(|p| points(&p.second)),
                    "source": r.found.as_ref().map(|p| p.source),
                    "evaluations": r.evaluations,
                    "impossible_by_counting": r.impossible_by_counting,
                }),
                verdict,
            )
            .param("n", n)
            .param("size", size)
            .param("budget", budget)
        }
        CapsetCmd::Product { left, right } => {
            let a: CapSet = parse_input(left)?;
            let b: CapSet = parse_input(right)?;
            let p = product(&a, &b)?;
            let r = check(&p);
            let inputs_are_caps = check(&a).is_cap && check(&b).is_cap;
            let verdict = match (inputs_are_caps, r.is_cap) {
                (false, _) => Verdict::RefutedInstance,
                (true, true) => Verdict::Verified,
                (true, false) => Verdict::Refuted,
            };
            Experiment::new(
                "capset.product",
                json!({ "n": p.n, "size": p.len(), "is_cap": r.is_cap, "points": points(&p) }),
                verdict,
            )
            .param("left", left)
            .param("right", right)
        }
    })
}
