use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "workbench", version, about = "Exact checks and searches for small combinatorial conjectures")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for every randomized operation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Wall-clock limit in seconds; exceeding it exits with code 3.
    #[arg(long, global = true, value_name = "SECONDS")]
    pub timeout: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report `runtime_ms` as 0, making repeated reports byte-identical.
    #[arg(long, global = true)]
    pub omit_timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pattern avoidance, inversion tables and shattering.
    #[command(subcommand)]
    Perms(PermsCmd),
    /// Distance to transitivity by subset inversions.
    #[command(subcommand)]
    Tournaments(TournamentsCmd),
    /// The RED/BLUE clique game on the edges of K_n.
    #[command(subcommand)]
    Game(GameCmd),
    /// Set-pair families: verifiers, construction, bound and exhaustive search.
    #[command(subcommand)]
    Setfam(SetfamCmd),
    /// Latin squares and cuboctahedra.
    #[command(subcommand)]
    Latin(LatinCmd),
    /// Cap sets in F_3^n.
    #[command(subcommand)]
    Capset(CapsetCmd),
    /// Package colourings, orientations, bipartite cycles and flip colourings.
    #[command(subcommand)]
    Graphs(GraphsCmd),
    /// Rotation systems, face tracing and genus.
    #[command(subcommand)]
    Surfaces(SurfacesCmd),
    /// Associated Stirling numbers of the first kind.
    #[command(subcommand)]
    Stirling(StirlingCmd),
    /// Run a battery of anchored checks; exits nonzero on any mismatch.
    Suite {
        #[arg(value_enum)]
        name: SuiteName,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    Quick,
    Acceptance,
}

#[derive(Debug, Subcommand)]
pub enum PermsCmd {
    /// Number of permutations of length n avoiding a pattern.
    Count {
        #[arg(long)]
        n: usize,
        /// Classical ("132") or boxed ("4 _ 1 3 2", "4_132").
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = workbench_core::perms::DEFAULT_EXHAUSTION_LIMIT)]
        limit: usize,
    },
    /// Compare avoider counts of several patterns for lengths 1..=n-max.
    Wilf {
        #[arg(long)]
        n_max: usize,
        #[arg(long = "pattern", required_unless_present = "dimitrov")]
        patterns: Vec<String>,
        /// Check the three boxed triples of 1234, 1243, 2143.
        #[arg(long, conflicts_with = "patterns")]
        dimitrov: bool,
        #[arg(long, default_value_t = workbench_core::perms::DEFAULT_EXHAUSTION_LIMIT)]
        limit: usize,
    },
    /// 1324-avoiders by inversion count, with the row monotonicity check.
    Inversions {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        k_max: usize,
        #[arg(long, default_value_t = workbench_core::perms::DEFAULT_EXHAUSTION_LIMIT)]
        limit: usize,
    },
    /// k-subsets shattered by a family, e.g. --family 12345,35241,41523.
    Shatter {
        #[arg(long, value_delimiter = ',', required = true)]
        family: Vec<String>,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Hill-climbing search for a family shattering many triples.
    ShatterSearch {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        size: usize,
        #[arg(long, default_value_t = 500_000)]
        budget: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum TournamentsCmd {
    /// inv(T) for a tournament given as "n bits", e.g. "3 101".
    Inv {
        #[arg(long)]
        tournament: String,
        #[arg(long, default_value_t = workbench_core::tournaments::DEFAULT_TABLE_CAP)]
        cap: usize,
    },
    /// Histogram of inv over all tournaments on n vertices.
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = workbench_core::tournaments::DEFAULT_TABLE_CAP)]
        cap: usize,
    },
    /// Distribution of inv(T1 ⇒ T2) − inv(T1) − inv(T2).
    Additivity {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long, default_value_t = workbench_core::tournaments::DEFAULT_TABLE_CAP)]
        cap: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MemoArg {
    None,
    Raw,
    Canonical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlayerArg {
    Red,
    Blue,
}

#[derive(Debug, Subcommand)]
pub enum GameCmd {
    /// Exact winner under optimal play with a principal variation.
    Solve {
        #[arg(long)]
        n: usize,
        /// Largest n accepted; raise to 6 to opt in.
        #[arg(long, default_value_t = workbench_core::cliquegame::DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = MemoArg::Canonical)]
        memo: MemoArg,
        /// Colour that moves first; `blue` is the mirrored game.
        #[arg(long, value_enum, default_value_t = PlayerArg::Red)]
        first: PlayerArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Bollobas,
    Calbet,
}

#[derive(Debug, Subcommand)]
pub enum SetfamCmd {
    /// The conjectured upper bound for |A_i| = a, |B_i| = b.
    Bound {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    /// The extremal construction, checked against the bound.
    Construct {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    /// Verify a family read from JSON: a list of [A, B] pairs.
    Check {
        #[arg(long)]
        input: std::path::PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// Exact maximum family size over the ground set 1..=ground.
    BruteForce {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        ground: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Calbet)]
        mode: ModeArg,
    },
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct SquareSource {
    /// Square as n lines of n symbols.
    #[arg(long)]
    pub input: Option<std::path::PathBuf>,
    /// Cayley table: "cyclic:5" or "product:2,2".
    #[arg(long)]
    pub group: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum LatinCmd {
    /// Exact cuboctahedron count.
    Count {
        #[command(flatten)]
        source: SquareSource,
    },
    /// Whether count = n^5 agrees with group-table recognition.
    Brandt {
        #[command(flatten)]
        source: SquareSource,
    },
    /// Jacobson–Matthews samples and their counts.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Proper squares visited per sample (default: max(n^3, 100)).
        #[arg(long)]
        steps: Option<u64>,
    },
    /// Local search for a square with few cuboctahedra.
    Minimize {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20_000)]
        budget: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CapsetCmd {
    /// Verify a point set given as one trit string per line.
    Check {
        #[arg(long)]
        input: std::path::PathBuf,
    },
    /// Exact maximum cap size for n <= 4.
    Max {
        #[arg(long)]
        n: usize,
    },
    /// Search for two disjoint caps of the given size.
    Disjoint {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
    /// Product of two caps, verified.
    Product {
        #[arg(long)]
        left: std::path::PathBuf,
        #[arg(long)]
        right: std::path::PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NeighbourhoodArg {
    Induced,
    Incident,
}

#[derive(Debug, Subcommand)]
pub enum GraphsCmd {
    /// Whether a colour set package-colours Z, with a periodic certificate.
    ColoursZ {
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u32>,
        /// Refuse when prod(s + 2) exceeds this.
        #[arg(long, default_value_t = workbench_core::graphlab::DEFAULT_STATE_CAP)]
        cap: u128,
    },
    /// Sample colour sets with sum 1/(s+1) < 2 and bound the infimum from below.
    Infimum {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 2_000_000)]
        visit_budget: u64,
    },
    /// Subset condition sum λ(X) >= e(X) for a graph in "n m" edge-list form.
    Hall {
        #[arg(long)]
        input: std::path::PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        lambda: Vec<usize>,
    },
    /// Orientation with in-degree at most λ, by max flow.
    Orient {
        #[arg(long)]
        input: std::path::PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        lambda: Vec<usize>,
    },
    /// Compare the subset condition with the flow test on random instances.
    Equivalence {
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
    /// Cycle of length 2|A| under the N̂ hypothesis ("n m a" header).
    BipartiteCycle {
        #[arg(long)]
        input: std::path::PathBuf,
    },
    /// Verify a flip colouring read from JSON.
    FlipVerify {
        #[arg(long)]
        input: std::path::PathBuf,
        #[arg(long, value_enum, default_value_t = NeighbourhoodArg::Induced)]
        mode: NeighbourhoodArg,
    },
    /// Randomized search for a flip colouring.
    FlipSearch {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u32>,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = NeighbourhoodArg::Induced)]
        mode: NeighbourhoodArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum SurfacesCmd {
    /// Faces and genus of a rotation system (line v: neighbours of v in cyclic order).
    Genus {
        #[arg(long)]
        input: std::path::PathBuf,
    },
    /// All 7776 rotation systems of K5, classified at one genus.
    ClassifyK5 {
        #[arg(long, default_value_t = 3)]
        genus: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum StirlingCmd {
    /// Table of r-associated Stirling cycle numbers for n <= n-max.
    Table {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Log-concavity of every cycle polynomial up to n-max.
    LogConcavity {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Real-rootedness of every cycle polynomial up to n-max.
    RealRooted {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n_max: usize,
    },
}
