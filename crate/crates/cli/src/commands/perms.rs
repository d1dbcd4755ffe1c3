use serde_json::json;
use workbench_core::perms::{
    avoiders_by_inversions, count_avoiders, dimitrov_triples, shatter_search, shattered_ksets, wilf_check, Pattern,
    Permutation, WilfTable,
};

use crate::args::PermsCmd;
use crate::error::CliResult;
use crate::report::{Experiment, Table, Verdict};

pub fn run(cmd: &PermsCmd, seed: u64) -> CliResult<Experiment> {
    Ok(match cmd {
        PermsCmd::Count { n, pattern, limit } => {
            let q: Pattern = pattern.parse()?;
            let count = count_avoiders(*n, &q, *limit)?;
            Experiment::new("perms.count", json!({ "pattern": q.to_string(), "count": count }), Verdict::ReportOnly)
                .param("n", n)
                .param("pattern", pattern)
        }
        PermsCmd::Wilf { n_max, patterns, dimitrov, limit } => {
            let groups: Vec<Vec<Pattern>> = if *dimitrov {
                dimitrov_triples().into_iter().map(Vec::from).collect()
            } else {
                vec![patterns.iter().map(|p| p.parse()).collect::<Result<_, _>>()?]
            };
            let tables = groups
                .iter()
                .map(|g| wilf_check(*n_max, g, *limit))
                .collect::<Result<Vec<WilfTable>, _>>()?;
            let all_equal = tables.iter().all(WilfTable::all_equal);
            let mut table = Table {
                header: vec!["group".into(), "pattern".into(), "n".into(), "count".into()],
                rows: vec![],
            };
            for (g, t) in tables.iter().enumerate() {
                for (p, counts) in t.patterns.iter().zip(&t.counts) {
                    for (i, c) in counts.iter().enumerate() {
                        table.rows.push(vec![g.to_string(), p.clone(), (i + 1).to_string(), c.to_string()]);
                    }
                }
            }
            let first_inequality: Vec<Option<usize>> = tables.iter().map(WilfTable::first_inequality).collect();
            let verdict = if all_equal { Verdict::Verified } else { Verdict::Refuted };
            Experiment::new(
                "perms.wilf",
                json!({ "groups": tables, "all_equal": all_equal, "first_inequality": first_inequality }),
                verdict,
            )
            .param("n_max", n_max)
            .param("dimitrov", dimitrov)
            .param("patterns", patterns)
            .table(table)
        }
        PermsCmd::Inversions { n_max, k_max, limit } => {
            let t = avoiders_by_inversions(*n_max, *k_max, *limit)?;
            let violation = t.monotonicity_violation();
            let totals: Vec<u64> = (0..=t.n_max()).map(|n| t.total(n)).collect();
            let mut table = Table {
                header: vec!["n".into(), "k".into(), "count".into()],
                rows: vec![],
            };
            for n in 0..=t.n_max() {
                for k in 0..=*k_max {
                    table.rows.push(vec![n.to_string(), k.to_string(), t.get(n, k).to_string()]);
                }
            }
            let verdict = if violation.is_none() { Verdict::Verified } else { Verdict::Refuted };
            Experiment::new(
                "perms.inversions",
                json!({ "table": t, "totals": totals, "monotonicity_violation": violation }),
                verdict,
            )
            .param("n_max", n_max)
            .param("k_max", k_max)
            .table(table)
        }
        PermsCmd::Shatter { family, k } => {
            let family: Vec<Permutation> = family.iter().map(|p| p.trim().parse()).collect::<Result<_, _>>()?;
            let report = shattered_ksets(&family, *k)?;
            Experiment::new("perms.shatter", &report, Verdict::ReportOnly)
                .param("family", family.iter().map(ToString::to_string).collect::<Vec<_>>())
                .param("k", k)
        }
        PermsCmd::ShatterSearch { n, size, budget } => {
            let r = shatter_search(*n, *size, *budget, seed)?;
            Experiment::new(
                "perms.shatter-search",
                json!({
                    "n": r.n,
                    "family": r.family.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "count": r.count,
                    "evaluations": r.evaluations,
                    "restarts": r.restarts,
                }),
                Verdict::ReportOnly,
            )
            .param("n", n)
            .param("size", size)
            .param("budget", budget)
        }
    })
}
