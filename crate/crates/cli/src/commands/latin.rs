use serde_json::json;
use workbench_core::latin::{
    cayley_table, count_cuboctahedra, default_mixing_steps, is_group_table, jm_samples, minimize_cuboctahedra,
    GroupSpec, LatinSquare,
};

use super::parse_input;
use crate::args::{LatinCmd, SquareSource};
use crate::error::{CliError, CliResult};
use crate::report::{Experiment, Table, Verdict};

/// `cyclic:5` or `product:2,2`.
fn parse_group(spec: &str) -> CliResult<GroupSpec> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("group {spec:?} must look like cyclic:5 or product:2,2")))?;
    let orders = rest
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(format!("group orders in {spec:?}: {e}")))?;
    match (kind, orders.as_slice()) {
        ("cyclic", [n]) => Ok(GroupSpec::Cyclic(*n)),
        ("product", _) => Ok(GroupSpec::Product(orders)),
        _ => Err(CliError::Usage(format!("unknown group spec {spec:?}"))),
    }
}

fn load(source: &SquareSource) -> CliResult<LatinSquare> {
    match (&source.input, &source.group) {
        (Some(path), _) => parse_input(path),
        (None, Some(g)) => Ok(cayley_table(&parse_group(g)?)?),
        (None, None) => Err(CliError::Usage("give --input or --group".into())),
    }
}

fn describe(source: &SquareSource) -> String {
    match (&source.input, &source.group) {
        (Some(p), _) => p.display().to_string(),
        (None, Some(g)) => g.clone(),
        _ => String::new(),
    }
}

pub fn run(cmd: &LatinCmd, seed: u64) -> CliResult<Experiment> {
    Ok(match cmd {
        LatinCmd::Count { source } => {
            let l = load(source)?;
            let n = l.order();
            let count = count_cuboctahedra(&l);
            Experiment::new(
                "latin.count",
                json!({
                    "n": n,
                    "count": count.to_string(),
                    "ratio": count as f64 / (n as f64).powi(4),
                    "maximum": (n as u128).pow(5).to_string(),
                }),
                Verdict::ReportOnly,
            )
            .param("source", describe(source))
        }
        LatinCmd::Brandt { source } => {
            let l = load(source)?;
            let n = l.order();
            let count = count_cuboctahedra(&l);
            let is_group = is_group_table(&l);
            let at_max = count == (n as u128).pow(5);
            Experiment::new(
                "latin.brandt",
                json!({ "n": n, "count": count.to_string(), "is_group_table": is_group, "count_is_maximum": at_max }),
                if is_group == at_max { Verdict::Verified } else { Verdict::Refuted },
            )
            .param("source", describe(source))
        }
        LatinCmd::Sample { n, count, steps } => {
            let steps = steps.unwrap_or_else(|| default_mixing_steps(*n));
            let squares = jm_samples(*n, *count, steps, seed)?;
            let counts: Vec<u128> = squares.iter().map(count_cuboctahedra).collect();
            let n4 = (*n as f64).powi(4);
            let ratios: Vec<f64> = counts.iter().map(|&c| c as f64 / n4).collect();
            let mean = ratios.iter().sum::<f64>() / ratios.len().max(1) as f64;
            let rows = counts
                .iter()
                .zip(&ratios)
                .enumerate()
                .map(|(i, (c, r))| vec![i.to_string(), c.to_string(), format!("{r:.6}")])
                .collect();
            Experiment::new(
                "latin.sample",
                json!({
                    "n": n,
                    "steps": steps,
                    "counts": counts.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "mean_ratio": mean,
                    "min_ratio": ratios.iter().copied().fold(f64::INFINITY, f64::min),
                    "max_ratio": ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                }),
                Verdict::ReportOnly,
            )
            .param("n", n)
            .param("count", count)
            .param("steps", steps)
            .table(Table {
                header: vec!["sample".into(), "count".into(), "ratio".into()],
                rows,
            })
        }
        LatinCmd::Minimize { n, budget } => {
            let r = minimize_cuboctahedra(*n, *budget, seed)?;
            Experiment::new(
                "latin.minimize",
                json!({
                    "n": r.n,
                    "best": r.best.rows(),
                    "count": r.count.to_string(),
                    "ratio": r.ratio,
                    "evaluations": r.evaluations,
                    "restarts": r.restarts,
                }),
                Verdict::ReportOnly,
            )
            .param("n", n)
            .param("budget", budget)
        }
    })
}
