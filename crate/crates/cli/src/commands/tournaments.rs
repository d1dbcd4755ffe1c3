use serde_json::json;
use workbench_core::tournaments::{additivity_probe, inv_table, Tournament};

use crate::args::TournamentsCmd;
use crate::error::CliResult;
use crate::report::{Experiment, Table, Verdict};

pub fn run(cmd: &TournamentsCmd) -> CliResult<Experiment> {
    Ok(match cmd {
        TournamentsCmd::Inv { tournament, cap } => {
            let t: Tournament = tournament.parse()?;
            let table = inv_table(t.n(), *cap)?;
            Experiment::new(
                "tournaments.inv",
                json!({ "tournament": t.to_string(), "inv": table.inv(&t), "transitive": t.is_transitive() }),
                Verdict::ReportOnly,
            )
            .param("tournament", tournament)
        }
        TournamentsCmd::Table { n, cap } => {
            let table = inv_table(*n, *cap)?;
            let histogram = table.histogram();
            let rows = histogram.iter().enumerate().map(|(d, c)| vec![d.to_string(), c.to_string()]).collect();
            Experiment::new(
                "tournaments.table",
                json!({ "n": n, "tournaments": table.len(), "max_inv": table.max(), "histogram": histogram }),
                Verdict::ReportOnly,
            )
            .param("n", n)
            .table(Table {
                header: vec!["inv".into(), "tournaments".into()],
                rows,
            })
        }
        TournamentsCmd::Additivity { n1, n2, cap } => {
            let r = additivity_probe(*n1, *n2, *cap)?;
            let rows = r.histogram.iter().map(|(d, c)| vec![d.to_string(), c.to_string()]).collect();
            Experiment::new("tournaments.additivity", &r, Verdict::ReportOnly)
                .param("n1", n1)
                .param("n2", n2)
                .table(Table {
                    header: vec!["defect".into(), "pairs".into()],
                    rows,
                })
        }
    })
}
