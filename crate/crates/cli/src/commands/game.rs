use serde_json::json;
use workbench_core::cliquegame::{solve_with, Memo, Player, Rules};

use crate::args::{GameCmd, MemoArg, PlayerArg};
use crate::error::CliResult;
use crate::report::{Experiment, Table, Verdict};

pub fn run(cmd: &GameCmd) -> CliResult<Experiment> {
    let GameCmd::Solve { n, cap, memo, first } = cmd;
    let memo_mode = match memo {
        MemoArg::None => Memo::None,
        MemoArg::Raw => Memo::Raw,
        MemoArg::Canonical => Memo::Canonical,
    };
    let first_player = match first {
        PlayerArg::Red => Player::Red,
        PlayerArg::Blue => Player::Blue,
    };
    let r = solve_with(*n, *cap, Rules { first: first_player }, memo_mode)?;
    // the conjecture: the second player wins
    let expected = first_player.other();
    let verdict = if *n < 3 {
        Verdict::ReportOnly
    } else if r.winner == expected {
        Verdict::Verified
    } else {
        Verdict::Refuted
    };
    let rows = r
        .principal_variation
        .iter()
        .enumerate()
        .map(|(i, m)| vec![(i + 1).to_string(), m.player.to_string(), m.u.to_string(), m.v.to_string()])
        .collect();
    Ok(Experiment::new(
        "game.solve",
        json!({
            "n": r.n,
            "winner": r.winner,
            "principal_variation": r.principal_variation,
            "positions_stored": r.positions_stored,
        }),
        verdict,
    )
    .param("n", n)
    .param("memo", format!("{memo:?}").to_lowercase())
    .param("first", first_player)
    .table(Table {
        header: vec!["ply".into(), "player".into(), "u".into(), "v".into()],
        rows,
    }))
}
