mod cache;
mod commands;
mod points;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Fat point interpolation degrees and Seshadri constant bounds.
#[derive(Parser, Debug)]
#[command(name = "seshadri", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Least degree of a form vanishing to the given orders.
    Alpha(AlphaArgs),
    /// Witness-derived upper bounds for uniform multiplicities 1..=mmax.
    Sweep(SweepArgs),
    /// Every applicable lower and upper bound and whether they meet.
    Bounds(BoundsArgs),
    /// Run property suites.
    Verify(VerifyArgs),
    /// Expected versus measured dimensions for double points.
    Expdim(ExpdimArgs),
}

#[derive(Args, Debug, Clone)]
pub struct EngineArgs {
    /// Base seed for random configurations.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated 31-bit primes (default: five fixed primes below 2^31).
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Random configurations per prime.
    #[arg(long, default_value_t = 2)]
    pub trials: u32,
    /// Scan degrees upward instead of bisecting.
    #[arg(long)]
    pub scan: bool,
}

#[derive(Args, Debug, Clone)]
pub struct CacheArgs {
    /// JSON-lines result cache (falls back to SESHADRI_CACHE).
    #[arg(long, env = "SESHADRI_CACHE")]
    pub cache: Option<PathBuf>,
    /// Recompute cache hits and fail on any difference.
    #[arg(long)]
    pub recheck: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct AlphaArgs {
    #[arg(long)]
    pub n: usize,
    /// Number of points (required for random points).
    #[arg(long)]
    pub r: Option<usize>,
    /// Comma list `2,2,1` or `uniform:m`.
    #[arg(long)]
    pub mults: String,
    /// A points file, or `random`.
    #[arg(long, default_value = "random")]
    pub points: String,
    /// Write the witness coefficients (grevlex order) as a JSON array.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Re-check the witness by substitution and one degree down; exit 1 on failure.
    #[arg(long)]
    pub certify: bool,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub cache: CacheArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub mmax: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub cache: CacheArgs,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: usize,
    /// Volume `L^n`.
    #[arg(long = "Ln")]
    pub ln: u64,
    /// One-point constant: a radical literal such as `2` or `3^(1/2)`, or `steffens`.
    #[arg(long = "eps-point")]
    pub eps_point: String,
    #[arg(long)]
    pub r: u64,
    /// Comma set from nagata, ns-generator, char0, very-ample.
    #[arg(long, value_delimiter = ',')]
    pub assume: Vec<String>,
    /// Also run the engine sweep up to this multiplicity and add its upper
    /// bounds; only meaningful for the hyperplane class on projective space.
    #[arg(long)]
    pub sweep: Option<u32>,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    RemarkAlpha,
    Semicontinuity,
    Axioms,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long)]
    pub mmax: Option<u32>,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Args, Debug)]
pub struct ExpdimArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "d-max")]
    pub d_max: u32,
    #[arg(long = "r-max")]
    pub r_max: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub engine: EngineArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}
