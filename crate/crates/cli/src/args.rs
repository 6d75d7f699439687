use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug, Serialize)]
#[command(name = "tspn", version, about = "Guillotine subdivisions and oracles for TSP with disk neighborhoods")]
pub struct Cli {
    /// Worker threads; falls back to TSPN_THREADS, then to the core count.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory receiving result.json and any SVG pictures.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Also draw an SVG (written to the output directory).
    #[arg(long, global = true)]
    pub svg: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Solve an instance with one of the reference solvers.
    Solve(SolveArgs),
    /// Make a tour guillotine, optionally on the rounding grid.
    Transform(TransformArgs),
    /// Decide whether an edge set is (m, M)-guillotine.
    Check(CheckArgs),
    /// Certify one of the shipped counterexample claims.
    Certify(CertifyArgs),
    /// Draw an instance with an optional tour or edge set.
    Render(RenderArgs),
    /// Generate an instance.
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Oracle,
    Centers,
    Dp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    SpanInE,
    BothSides,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Candidates {
    HalfGrid,
    GridOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Localization,
    DisconnectedRegionSpan,
}

impl Claim {
    pub fn name(self) -> &'static str {
        match self {
            Claim::Localization => "localization",
            Claim::DisconnectedRegionSpan => "disconnected_region_span",
        }
    }
}

/// Grid used by the guillotine commands and the dynamic program.
#[derive(Args, Debug, Serialize)]
pub struct GridArgs {
    /// Grid spacing as a rational, e.g. 1/4.
    #[arg(long, default_value = "1")]
    pub spacing: String,
    /// Grid origin "x,y"; defaults to the floored lower-left corner of the content.
    #[arg(long)]
    pub origin: Option<String>,
    /// Window "xmin,xmax,ymin,ymax"; defaults to the content box padded by one grid cell.
    #[arg(long)]
    pub window: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value = "oracle")]
    pub method: Method,
    /// Boundary samples per disk for the oracle.
    #[arg(long, default_value_t = 128)]
    pub samples: usize,
    /// Sample spacing along polygon boundaries for the oracle.
    #[arg(long, default_value = "1/8")]
    pub polygon_spacing: String,
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    #[arg(long = "M", default_value_t = 24)]
    pub big_m: usize,
    /// Grid spacing of the dynamic program.
    #[arg(long, default_value = "1/4")]
    pub spacing: String,
}

#[derive(Args, Debug, Serialize)]
pub struct TransformArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Tour file; the oracle tour is used when absent.
    #[arg(long)]
    pub tour: Option<PathBuf>,
    /// Round to the grid and run the grid-rounded transform.
    #[arg(long)]
    pub grid: bool,
    #[arg(long, default_value_t = 32)]
    pub m: usize,
    #[arg(long = "M", default_value_t = 24)]
    pub big_m: usize,
    /// Enforce the (64/m + K/M) length bound on the output.
    #[arg(long)]
    pub paper_regime: bool,
    #[command(flatten)]
    pub grid_args: GridArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct CheckArgs {
    /// Edge set file: {"segments": [...]} or a closed {"points": [...]}.
    #[arg(long)]
    pub edges: PathBuf,
    /// Regions; none when absent.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub m: usize,
    #[arg(long = "M")]
    pub big_m: usize,
    #[arg(long, value_enum, default_value = "span-in-e")]
    pub variant: Variant,
    #[arg(long, value_enum, default_value = "half-grid")]
    pub candidates: Candidates,
    #[command(flatten)]
    pub grid_args: GridArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct CertifyArgs {
    #[arg(long, value_enum)]
    pub claim: Claim,
    /// Instance to certify; the shipped one when absent.
    #[arg(long)]
    pub instance: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct RenderArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Draw the grid with this spacing.
    #[arg(long)]
    pub grid_spacing: Option<String>,
    /// SVG path; defaults to render.svg in the output directory.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct GenArgs {
    #[command(subcommand)]
    pub kind: GenKind,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenKind {
    /// Disjoint unit disks with lattice centres.
    Random {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Side of the square holding the centres.
        #[arg(long, default_value_t = 40)]
        side: i64,
    },
    /// A shipped counterexample with its certificate.
    Counterexample {
        #[arg(long, value_enum)]
        claim: Claim,
    },
}
