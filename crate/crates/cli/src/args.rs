use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "vdecomp", version, about = "Exact fractional and integer vector clique decompositions")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Weight vector: inline `T3=1,C3=0`, or a file path (prefix `@` to force a file)
    #[arg(long, global = true)]
    pub vector: Option<String>,
    /// Clique order k
    #[arg(long, global = true, default_value_t = 3)]
    pub k: usize,
    /// Evaluation mode for searches
    #[arg(long, global = true, value_enum, default_value_t = Mode::Presolve)]
    pub mode: Mode,
    /// Worker threads (0 = available parallelism)
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Seed for random constructions
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Primary output file (default: stdout)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Resume a search from its checkpoint
    #[arg(long, global = true)]
    pub resume: bool,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// every LP solved exactly
    Exact,
    /// float filter in front of exact solves
    Presolve,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Jsonl,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum HostKind {
    Tournament,
    Graph,
    Bicolored,
}

/// One way of naming a host.
#[derive(Args, Debug, Clone)]
pub struct HostArgs {
    /// Cyclic blow-up with these part sizes, e.g. 5,5,4
    #[arg(long, value_delimiter = ',')]
    pub blowup: Option<Vec<usize>>,
    /// Orient blow-up parts randomly from --seed instead of transitively
    #[arg(long)]
    pub random_inner: bool,
    /// Transitive tournament on N vertices
    #[arg(long, value_name = "N")]
    pub transitive: Option<usize>,
    /// Tournament given as one digraph6 record
    #[arg(long)]
    pub digraph6: Option<String>,
    /// Graph given as one graph6 record (read as a two-colored complete graph)
    #[arg(long)]
    pub graph6: Option<String>,
    /// Two-colored complete graph whose blue edges form K_{a,b}
    #[arg(long, value_delimiter = ',', value_name = "A,B")]
    pub bipartite: Option<Vec<usize>>,
    /// Random complete host on N vertices (uses --kind, --p and --seed)
    #[arg(long, value_name = "N")]
    pub random: Option<usize>,
    #[arg(long, value_enum, default_value_t = HostKind::Tournament)]
    pub kind: HostKind,
    /// Probability of an edge (or of the higher vertex winning) in --random
    #[arg(long, default_value = "1/2")]
    pub p: String,
    /// File of digraph6 or graph6 records
    #[arg(long)]
    pub host_file: Option<PathBuf>,
    /// 1-based record line in --host-file
    #[arg(long, default_value_t = 1)]
    pub line: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact D* of a host
    Dstar {
        #[command(flatten)]
        host: HostArgs,
        /// Pair rows as packings (<= 1) instead of decompositions
        #[arg(long)]
        packing: bool,
    },
    /// Exact nu* = D* C(k,2) / |E| of a host
    Nustar {
        #[command(flatten)]
        host: HostArgs,
        /// Report 0 for hosts without a fractional decomposition
        #[arg(long)]
        infeasible_zero: bool,
    },
    /// Threshold-driven extension search over tournaments
    Search(SearchArgs),
    /// Optimum of the random-graph program over pattern frequencies
    LpVp {
        /// Edge probability
        #[arg(long)]
        p: String,
    },
    /// Limit bound (value (r-1) + 1) / r
    Bound {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        value: String,
    },
    /// Non-isomorphic tournaments of order n, as digraph6
    Enum {
        #[arg(short = 'n', long)]
        n: usize,
    },
    /// Best exact decomposition of a complete host (branch and bound)
    Intopt {
        #[command(flatten)]
        host: HostArgs,
    },
    /// Re-encode digraph6/graph6 records, or dump their decomposition LPs
    Convert {
        /// Input file (default: stdin)
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ConvertTarget::Same)]
        to: ConvertTarget,
        /// Relabel every host canonically first
        #[arg(long)]
        canonical: bool,
    },
    /// Summarize a search checkpoint file
    CheckpointInfo { path: PathBuf },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvertTarget {
    /// the input's own format
    Same,
    Digraph6,
    Graph6,
    /// decomposition LP in the line-oriented text format (needs --vector)
    Lp,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// digraph6 catalog of the base order
    #[arg(long, conflicts_with = "base_enum")]
    pub base: Option<PathBuf>,
    /// Enumerate the base catalog of this order instead of reading a file
    #[arg(long, value_name = "N")]
    pub base_enum: Option<usize>,
    /// Catalog size that makes the base complete; `auto` uses known counts
    #[arg(long, value_name = "N|auto")]
    pub complete_count: Option<String>,
    /// Target threshold at the top order
    #[arg(long, default_value = "26")]
    pub target: String,
    #[arg(long, default_value_t = 14)]
    pub r_hi: usize,
    /// Lowest order (defaults to the base order)
    #[arg(long)]
    pub r_lo: Option<usize>,
    /// Comma-separated thresholds for the top orders, ascending, e.g. 12.86,15.72,18.86,22.3,26
    #[arg(long, value_delimiter = ',')]
    pub decimal: Option<Vec<String>>,
    /// Threshold override ORDER=VALUE (repeatable)
    #[arg(long = "override", value_name = "ORDER=VALUE")]
    pub overrides: Vec<String>,
    /// Stop after evaluating this order
    #[arg(long)]
    pub stop_order: Option<usize>,
    #[arg(long, default_value_t = 4096)]
    pub chunk_size: u64,
    /// Float presolve guard band
    #[arg(long, default_value = "1/100")]
    pub guard: String,
    /// Solve presolve-decided hosts exactly too and fail on disagreement
    #[arg(long)]
    pub verify_presolve: bool,
    /// Skip counting isomorphism classes of survivors
    #[arg(long)]
    pub no_dedup: bool,
    /// Checkpoint file
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Seconds between mid-level checkpoint writes
    #[arg(long, default_value_t = 60)]
    pub checkpoint_interval: u64,
    /// Write the survivors of the last level here as digraph6
    #[arg(long)]
    pub survivors: Option<PathBuf>,
    /// Stop after this many chunks (as if interrupted)
    #[arg(long, hide = true)]
    pub stop_after_chunks: Option<u64>,
}
