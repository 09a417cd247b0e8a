//! Command-line flags.

use std::path::PathBuf;

use aztec::lattice::{DimerKind, Weight};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "dimerctl", version, about = "Sampling, exact kernels and limit checks for weighted Aztec diamond tilings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write sampled tilings to files, one per sample.
    Sample(SampleArgs),
    /// Draw a tiling file as SVG.
    Render(RenderArgs),
    /// Exact (or, for a decimal weight, numeric) kernel values as CSV.
    Exact {
        #[command(subcommand)]
        what: ExactCommand,
    },
    /// Run invariant suites; exit status 1 if any fails.
    Validate(ValidateArgs),
    /// Rescaled south-domino or hole statistics near the edge of the ellipse.
    EdgeStats(EdgeStatsArgs),
    /// Dimer orientation frequencies around a bulk point against the Gibbs measure.
    BulkStats(BulkStatsArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DiamondArgs {
    /// Order of the diamond.
    #[arg(long, value_parser = parse_order)]
    pub n: usize,
    /// Vertical weight: `p/q` or an integer for exact arithmetic, a decimal otherwise.
    #[arg(long, value_parser = parse_weight, allow_hyphen_values = true)]
    pub a: Weight,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub diamond: DiamondArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, value_parser = parse_count)]
    pub count: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Label every face with its height.
    #[arg(long)]
    pub height: bool,
}

#[derive(Debug, Subcommand)]
pub enum ExactCommand {
    /// Every entry of the inverse Kasteleyn matrix.
    Inverse(DiamondArgs),
    /// Probability that all the given dimers are present.
    EdgeProb {
        #[command(flatten)]
        diamond: DiamondArgs,
        /// Black vertex and kind, e.g. `0,1,W`; repeat for a joint probability.
        #[arg(long = "edge", value_parser = parse_edge, required = true)]
        edges: Vec<(i64, i64, DimerKind)>,
    },
    /// Kernel of the south dominos on a horizontal line.
    LineKernel {
        #[command(flatten)]
        diamond: DiamondArgs,
        #[arg(long)]
        r: i64,
        /// Restrict to one row of the kernel.
        #[arg(long)]
        x1: Option<i64>,
        /// Restrict to one column of the kernel.
        #[arg(long)]
        x2: Option<i64>,
    },
    /// Weighted number of tilings, `|det K|`.
    Partition(DiamondArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Inverse,
    Fiveterm,
    Partition,
    Sampler,
    Asymptotics,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub diamond: DiamondArgs,
    /// Suites to run; all of them when omitted.
    #[arg(long = "suite", value_enum)]
    pub suites: Vec<Suite>,
    /// Sample count for the sampler suite.
    #[arg(long, default_value_t = 100_000, value_parser = parse_count)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct EdgeStatsArgs {
    #[command(flatten)]
    pub diamond: DiamondArgs,
    /// Slope of the line through the tangency point: positive for the north
    /// edge, negative for the south edge.
    #[arg(long, allow_hyphen_values = true)]
    pub k: f64,
    #[arg(long, value_parser = parse_count)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Histogram of the size of the outermost hole cluster (south edge only).
    #[arg(long)]
    pub holes: bool,
    /// Rescale by the Poisson-regime constant `c(a)` and predict the density
    /// `sqrt((1 - xi)_+)` (north edge only; meant for large `a`).
    #[arg(long, conflicts_with = "holes")]
    pub poisson: bool,
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    pub xi_min: f64,
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    pub xi_max: f64,
    #[arg(long, default_value_t = 0.5)]
    pub bin_width: f64,
}

#[derive(Debug, Args)]
pub struct BulkStatsArgs {
    #[command(flatten)]
    pub diamond: DiamondArgs,
    /// Rescaled position `xi1,xi2` inside the unit square.
    #[arg(long, value_parser = parse_point)]
    pub xi: (f64, f64),
    #[arg(long, value_parser = parse_count)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// White vertices within this many fundamental-domain steps of the
    /// point are pooled.
    #[arg(long, default_value_t = 2)]
    pub window: i64,
}

fn parse_order(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("order must be a positive integer, got {s:?}")),
    }
}

fn parse_count(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(c) if c >= 1 => Ok(c),
        _ => Err(format!("expected a positive count, got {s:?}")),
    }
}

fn parse_weight(s: &str) -> Result<Weight, String> {
    s.parse::<Weight>().map_err(|e| e.to_string())
}

fn parse_edge(s: &str) -> Result<(i64, i64, DimerKind), String> {
    let bad = || format!("expected `bx,by,K` with K one of N, E, S, W, got {s:?}");
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x1, x2, k] = parts[..] else { return Err(bad()) };
    let kind = match k.chars().collect::<Vec<_>>()[..] {
        [c] => DimerKind::from_letter(c).ok_or_else(bad)?,
        _ => return Err(bad()),
    };
    Ok((x1.parse().map_err(|_| bad())?, x2.parse().map_err(|_| bad())?, kind))
}

fn parse_point(s: &str) -> Result<(f64, f64), String> {
    let bad = || format!("expected `xi1,xi2`, got {s:?}");
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    Ok((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
}
