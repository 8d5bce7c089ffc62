use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Colored-graph workbench: constructions, containment, homomorphisms and
/// exhaustive verification for 0/1/2-weighted complete graphs.
#[derive(Debug, Parser)]
#[command(name = "wturan", version, about)]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads (default: all cores for verify/ex/threshold, 1 otherwise).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    /// Include wall-clock time in reports (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a named construction as a .cwg file.
    Gen(GenArgs),
    /// Check a graph for copies of family members.
    Check(CheckArgs),
    /// Search for a homomorphism into a target.
    Hom(HomArgs),
    /// Structural report: wicked triangles, secure edges, decomposition.
    Analyze(AnalyzeArgs),
    /// Raise weights until no pair can be raised without creating a member.
    Complete(CompleteArgs),
    /// Verify a stability theorem over all graphs of one order.
    Verify(VerifyArgs),
    /// Exact extremal number by branch and bound.
    Ex(ExArgs),
    /// Largest minimum degree of a family-free graph without the homomorphism.
    Threshold(ThresholdArgs),
    /// Edge densities of constructions beside the family's reference density.
    Density(DensityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Rk,
    Bk,
    RkMinus,
    Gab,
    Family,
    Hk,
    J,
    OddExtremal,
    EvenExtremal,
    EhssBlowup,
    BlowUp,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub construction: Construction,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub scale: usize,
    /// Order for rk, bk and rk-minus; `a+b` for gab.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Family index for `family` (all members are written, blank-line separated).
    #[arg(long)]
    pub t: Option<usize>,
    /// Pattern graph for blow-up.
    #[arg(long)]
    pub pattern: Option<PathBuf>,
    /// Comma-separated part sizes for blow-up.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Output path (stdout when omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the vertex partition as JSON.
    #[arg(long)]
    pub parts: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// `F:<t>` or `file:<path>`.
    #[arg(long)]
    pub family: String,
    /// Graph file (`-` for stdin).
    pub graph: PathBuf,
}

#[derive(Debug, Args)]
pub struct HomArgs {
    /// `rk:<r>`, `rkminus:<r>` or `file:<path>`.
    #[arg(long)]
    pub target: String,
    #[arg(long, value_name = "NODES")]
    pub budget: Option<u64>,
    pub graph: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub r: usize,
    pub graph: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Lex,
    Shuffled,
}

#[derive(Debug, Args)]
pub struct CompleteArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, value_enum, default_value_t = Policy::Lex)]
    pub policy: Policy,
    /// Seed for the shuffled policy.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    pub graph: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Raw,
    Iso,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub theorem: Kind,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Raw)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct ExArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub cap: u8,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value_t = ModeArg::Iso)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// `F:<t>`; without it the table is empty.
    #[arg(long)]
    pub family: Option<String>,
    /// Construction files.
    pub graphs: Vec<PathBuf>,
}
