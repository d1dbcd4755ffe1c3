use serde_json::json;
use workbench_core::setfam::{
    bound, brute_force_max, calbet_construction, check_bollobas, check_calbet, Mode, SearchCap, SetPair, SetPairFamily,
};

use super::read_input;
use crate::args::{ModeArg, SetfamCmd};
use crate::error::CliResult;
use crate::report::{Experiment, Verdict};

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Bollobas => Mode::Bollobas,
        ModeArg::Calbet => Mode::Calbet,
    }
}

pub fn run(cmd: &SetfamCmd) -> CliResult<Experiment> {
    Ok(match cmd {
        SetfamCmd::Bound { a, b } => {
            if *a < 2 || b < a {
                return Err(crate::error::CliError::Usage("bound needs b >= a >= 2".into()));
            }
            Experiment::new("setfam.bound", json!({ "bound": bound(*a, *b).to_string() }), Verdict::ReportOnly)
                .param("a", a)
                .param("b", b)
        }
        SetfamCmd::Construct { a, b } => {
            let f = calbet_construction(*a, *b)?;
            let r = check_calbet(&f)?;
            let meets = r.holds && r.size.to_string() == r.bound.to_string();
            Experiment::new(
                "setfam.construct",
                json!({
                    "family": f.pairs,
                    "size": r.size,
                    "bound": r.bound.to_string(),
                    "conditions_hold": r.holds,
                    "violation": r.violation,
                }),
                if meets { Verdict::Verified } else { Verdict::Refuted },
            )
            .param("a", a)
            .param("b", b)
        }
        SetfamCmd::Check { input, mode: m } => {
            let pairs: Vec<SetPair> = serde_json::from_str(&read_input(input)?)?;
            let f = SetPairFamily::infer(pairs)?;
            let (holds, size, bnd, within, violation) = match m {
                ModeArg::Bollobas => {
                    let r = check_bollobas(&f)?;
                    (r.holds, r.size, r.bound, r.within_bound, json!(r.violation))
                }
                ModeArg::Calbet => {
                    let r = check_calbet(&f)?;
                    (r.holds, r.size, r.bound, r.within_bound, json!(r.violation))
                }
            };
            // a valid family above the bound refutes the statement
            let verdict = match (holds, within) {
                (false, _) => Verdict::RefutedInstance,
                (true, true) => Verdict::Verified,
                (true, false) => Verdict::Refuted,
            };
            Experiment::new(
                "setfam.check",
                json!({
                    "a": f.a,
                    "b": f.b,
                    "size": size,
                    "bound": bnd.to_string(),
                    "conditions_hold": holds,
                    "within_bound": within,
                    "violation": violation,
                }),
                verdict,
            )
            .param("input", input)
            .param("mode", mode(*m))
        }
        SetfamCmd::BruteForce { a, b, ground, mode: m } => {
            let r = brute_force_max(*a, *b, *ground, mode(*m), SearchCap::default())?;
            let limit = match m {
                ModeArg::Bollobas => workbench_core::setfam::bollobas_bound(*a, *b),
                ModeArg::Calbet => bound(*a, *b),
            };
            let within = num_bigint::BigUint::from(r.max) <= limit;
            Experiment::new(
                "setfam.brute-force",
                json!({
                    "max": r.max,
                    "bound": limit.to_string(),
                    "witness": r.witness.pairs,
                    "candidates": r.candidates,
                }),
                if within { Verdict::Verified } else { Verdict::Refuted },
            )
            .param("a", a)
            .param("b", b)
            .param("ground", ground)
            .param("mode", r.mode)
        }
    })
}
