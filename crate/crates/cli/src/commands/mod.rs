//! One function per subcommand family, each returning an `Experiment`.

mod capset;
mod game;
mod graphs;
mod latin;
mod perms;
mod setfam;
mod stirling;
mod surfaces;
mod tournaments;

use std::path::Path;
use std::str::FromStr;

use crate::args::{Command, GlobalArgs};
use crate::error::{CliError, CliResult};
use crate::report::Experiment;

pub fn dispatch(command: &Command, global: &GlobalArgs) -> CliResult<Experiment> {
    match command {
        Command::Perms(c) => perms::run(c, global.seed),
        Command::Tournaments(c) => tournaments::run(c),
        Command::Game(c) => game::run(c),
        Command::Setfam(c) => setfam::run(c),
        Command::Latin(c) => latin::run(c, global.seed),
        Command::Capset(c) => capset::run(c, global.seed),
        Command::Graphs(c) => graphs::run(c, global.seed),
        Command::Surfaces(c) => surfaces::run(c),
        Command::Stirling(c) => stirling::run(c),
        Command::Suite { name } => crate::suite::experiment(*name, global.seed),
    }
}

pub(crate) fn read_input(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub(crate) fn parse_input<T>(path: &Path) -> CliResult<T>
where
    T: FromStr<Err = workbench_core::Error>,
{
    Ok(read_input(path)?.parse()?)
}
