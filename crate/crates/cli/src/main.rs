use clap::Parser;

fn main() {
    let cli = workbench_cli::args::Cli::parse();
    std::process::exit(workbench_cli::main_with(cli));
}
