use serde_json::json;
use workbench_core::stirling::{log_concavity_sweep, real_rootedness_sweep, StirlingTable, SweepReport};

use crate::args::StirlingCmd;
use crate::error::CliResult;
use crate::report::{Experiment, Table, Verdict};

fn sweep(problem: &'static str, r: SweepReport) -> Experiment {
    let verdict = if r.all_hold { Verdict::Verified } else { Verdict::Refuted };
    Experiment::new(problem, &r, verdict).param("r", r.r).param("n_max", r.n_max)
}

pub fn run(cmd: &StirlingCmd) -> CliResult<Experiment> {
    Ok(match cmd {
        StirlingCmd::Table { r, n_max } => {
            let t = StirlingTable::new(*r, *n_max);
            let rows: Vec<Vec<String>> = (0..=*n_max)
                .map(|n| t.row(n).iter().map(ToString::to_string).collect())
                .collect();
            let mut table = Table {
                header: vec!["n".into(), "k".into(), "value".into()],
                rows: vec![],
            };
            for (n, row) in rows.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    table.rows.push(vec![n.to_string(), k.to_string(), v.clone()]);
                }
            }
            Experiment::new("stirling.table", json!({ "r": r, "rows": rows }), Verdict::ReportOnly)
                .param("r", r)
                .param("n_max", n_max)
                .table(table)
        }
        StirlingCmd::LogConcavity { r, n_max } => sweep("stirling.log-concavity", log_concavity_sweep(*r, *n_max)?),
        StirlingCmd::RealRooted { r, n_max } => sweep("stirling.real-rooted", real_rootedness_sweep(*r, *n_max)?),
    })
}
