use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "refocus",
    version,
    about = "Compile spin-echo refocussing sequences from coupling graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a pulse schedule for a graph and target.
    Generate(GraphArgs),
    /// Check a schedule combinatorially (row balance and orthogonality).
    Verify(GraphArgs),
    /// Check a schedule by simulating the weak-coupling Hamiltonian.
    Simulate(GraphArgs),
    /// Compare the compiled sequence with the recursively nested one.
    Compare(GraphArgs),
    /// Draw a schedule as ASCII art.
    Diagram(GraphArgs),
    /// Print a Hadamard matrix as rows of `+` and `-`.
    Hadamard(HadamardArgs),
}

#[derive(Debug, Args)]
pub struct HadamardArgs {
    /// Matrix order: 1, 2 or a multiple of 4 up to 48.
    pub order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    TotalPulses,
    MaxSimultaneous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Ascii,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Graph document; stdin when omitted or `-`.
    pub input: Option<PathBuf>,

    /// Keep the chemical shift of this spin.
    #[arg(long, value_name = "SPIN", group = "target")]
    pub retain_shift: Option<String>,

    /// Keep the coupling between two spins, written `a:b`.
    #[arg(long, value_name = "A:B", group = "target")]
    pub retain_coupling: Option<String>,

    /// Refocus every shift and coupling.
    #[arg(long, group = "target")]
    pub refocus_all: bool,

    /// Existing schedule to check or draw instead of compiling one.
    #[arg(long, value_name = "PATH")]
    pub schedule: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = ObjectiveArg::TotalPulses)]
    pub objective: ObjectiveArg,

    /// Largest number of row assignments searched exhaustively.
    #[arg(long, default_value_t = refocus::compiler::DEFAULT_SEARCH_LIMIT)]
    pub search_limit: u64,

    /// Color the graph optimally (at most 12 spins) instead of greedily.
    #[arg(long)]
    pub exact_coloring: bool,

    /// Leave out the final parity pulses.
    #[arg(long)]
    pub omit_final: bool,

    /// Sequence duration in seconds.
    #[arg(long, default_value_t = 1.0)]
    pub total_time: f64,

    /// Seed for parameters the graph document leaves unspecified.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Parameter sets to simulate.
    #[arg(long, default_value_t = 10)]
    pub samples: usize,

    #[arg(long, default_value_t = refocus::simulator::DEFAULT_TOLERANCE)]
    pub tolerance: f64,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Diagram timeline width in characters.
    #[arg(long)]
    pub width: Option<usize>,
}
