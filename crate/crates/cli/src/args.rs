use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use harmult_core::quad::Convention;
use harmult_core::{ProbeFamily, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "harmult", version, about = "Mixed-norm harmonic Bergman spaces and coefficient multipliers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mixed norm of an expansion read from a coefficient file.
    Norm(NormArgs),
    /// Poisson or Q_m kernel: truncated series against the closed form.
    Kernel(KernelArgs),
    /// Numerical check of one of the six lemmas.
    Lemma(LemmaArgs),
    /// Boundary-growth condition against the operator-norm probe for a multiplier.
    MultCheck(MultCheckArgs),
    /// The acceptance suite, one line per criterion.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Reduced grids (see README).
    #[arg(long)]
    pub fast: bool,
}

#[derive(Debug, Clone, Args)]
pub struct NormArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub q: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value = "definition", value_parser = parse_convention)]
    pub convention: Convention,
    /// Sphere-rule resolution of the coarse level; default 4K + 16.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Radial points of the coarse level.
    #[arg(long, default_value_t = 32)]
    pub radial_points: usize,
    /// Allowed relative change between the two refinement levels.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KernelKind {
    Poisson,
    Q,
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    #[arg(long, value_enum, default_value = "poisson")]
    pub kind: KernelKind,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Order of the Q_m kernel.
    #[arg(long, default_value_t = 2.0)]
    pub m: f64,
    /// Radii at which the kernel is evaluated.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,0.9")]
    pub radius: Vec<f64>,
    /// Cosines <x', y'> at which the kernel is evaluated.
    #[arg(long, value_delimiter = ',', default_value = "-1,0,0.5,1")]
    pub cosine: Vec<f64>,
    /// Absolute tail bound fixing the truncation degree.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct LemmaArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
    pub id: u8,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub m: Option<u32>,
    /// Largest level `j` of the grid `1 - ρ = 2^{-j}` (lemmas 2 and 5).
    #[arg(long)]
    pub rho_levels: Option<u32>,
    /// Largest degree `k` (lemma 4).
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Coefficient file of the test function (lemma 5).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct MultCheckArgs {
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 2.0)]
    pub m: f64,
    /// `ones`, `powerlaw:t`, `finite:K`, or a coefficient file.
    #[arg(long, default_value = "ones")]
    pub multiplier: String,
    /// Largest level `j` of the grid `1 - ρ = 2^{-j}`; default 12 (10 with --fast).
    #[arg(long)]
    pub rho_levels: Option<u32>,
    /// Points per angular panel (zonal) or sphere resolution (full kind).
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long, default_value = "qm_kernels", value_parser = parse_probe)]
    pub probe: ProbeFamily,
    /// Largest probe level: `j` of `ρ_y = 1 - 2^{-j}` or `i` of degree `2^i`.
    #[arg(long)]
    pub probe_levels: Option<u32>,
    /// Evaluate the boundary-growth integral at `ρ²`.
    #[arg(long)]
    pub rho_squared: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    #[command(flatten)]
    pub common: Common,
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    s.parse().map_err(|e: harmult_core::Error| e.to_string())
}

fn parse_probe(s: &str) -> Result<ProbeFamily, String> {
    s.parse().map_err(|e: harmult_core::Error| e.to_string())
}
