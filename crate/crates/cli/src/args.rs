use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flintlab::diophantine::Exponent;
use flintlab::relation::BasisId;
use flintlab::series::SeriesId;

#[derive(Debug, Parser)]
#[command(name = "flintlab", version, about = "Flint Hills series laboratory")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Decimal digits of the result.
    #[arg(long, global = true, default_value_t = 30)]
    pub digits: u32,
    /// Extra digits carried for cancellation.
    #[arg(long, global = true, default_value_t = 15)]
    pub guard_digits: u32,
    /// Terms per summation chunk.
    #[arg(long, global = true, default_value_t = 1 << 16)]
    pub chunk: u64,
    /// Terms at least this large are recorded as spikes.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub spike_threshold: f64,
    /// Generic regime exponent, as p/q.
    #[arg(long, global = true, default_value = "1/2")]
    pub generic_exponent: Exponent,
    /// Resonant regime exponent, as p/q.
    #[arg(long, global = true, default_value = "3/2")]
    pub resonant_exponent: Exponent,
    /// Output directory (default: $FLINTLAB_OUT, else the current directory).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON run configuration; its fields override the flags above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partial sum of one series, resumable from a checkpoint.
    Sum(SumArgs),
    /// Regime census of 1..=N: CSV of every n plus a JSON summary.
    Classify(ClassifyArgs),
    /// Continued-fraction convergents of π.
    Convergents(ConvergentsArgs),
    /// Check an exact identity on partial sums.
    Verify(VerifyArgs),
    /// Least-squares Laurent fit of the kernel at its pole.
    Laurent(LaurentArgs),
    /// Pair the kernel and its transform against Gaussians.
    Spectral(SpectralArgs),
    /// PSLQ search over a basis of constants.
    Relation(RelationArgs),
    /// Regenerate the partial-sum table, spike, L-value and Lerch values.
    Report(ReportArgs),
    /// Compare F_cot and F_tan with their Clausen-type reductions.
    Clausen(ClausenArgs),
    /// Extrapolate R1* with and without the n = 355 spike.
    Accelerate(AccelerateArgs),
}

#[derive(Debug, Args)]
pub struct SumArgs {
    /// Series name: S, R1STAR, A, B, C, D, F_COT, F_TAN, G_COT, G_TAN, H3.
    #[arg(long)]
    pub series: SeriesId,
    /// Last index summed.
    #[arg(long = "N", alias = "n")]
    pub n: u64,
    /// Checkpoint to continue from; created if missing and updated on exit.
    #[arg(long)]
    pub resume: Option<PathBuf>,
    /// Where to write the final checkpoint (default: the resume path).
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Also checkpoint after every this many terms.
    #[arg(long)]
    pub checkpoint_every: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long = "N", alias = "n")]
    pub n: u64,
    /// Skip the per-integer CSV.
    #[arg(long)]
    pub summary_only: bool,
}

#[derive(Debug, Args)]
pub struct ConvergentsArgs {
    #[arg(long, default_value_t = 10)]
    pub count: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Identity {
    Reduction,
    Explicit,
    #[value(name = "partialfraction", alias = "partial-fraction")]
    PartialFraction,
    /// Largest per-term deviation of every termwise identity.
    Termwise,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub identity: Identity,
    #[arg(long = "N", alias = "n")]
    pub n: u64,
    /// Failure threshold on the residual.
    #[arg(long, default_value_t = 1e-25)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct LaurentArgs {
    /// Comma-separated fit radii (default: 12 log-spaced points in [0.002, 0.05]).
    #[arg(long, value_delimiter = ',')]
    pub radii: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SpectralArgs {
    /// Comma-separated Gaussian widths in [0.2, 2].
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,1.0")]
    pub sigma: Vec<f64>,
    /// Periods on each side of the origin.
    #[arg(long, default_value_t = 40)]
    pub periods: u32,
    /// Pole-subtraction radius.
    #[arg(long, default_value_t = 0.5)]
    pub radius: f64,
    /// Gauss-Legendre nodes per panel.
    #[arg(long, default_value_t = 24)]
    pub nodes: usize,
    /// Relative quadrature budget.
    #[arg(long, default_value_t = 1e-10)]
    pub budget: f64,
    /// Range of k for the non-resonance minimum.
    #[arg(long, default_value_t = 10_000)]
    pub resonance_kmax: u64,
}

#[derive(Debug, Args)]
pub struct RelationArgs {
    /// FCOT_BASIS, FTAN_BASIS or CL3_BASIS.
    #[arg(long)]
    pub basis: BasisId,
    /// Largest coefficient searched.
    #[arg(long, default_value_t = 1000)]
    pub bound: u64,
    /// Digits the search relies on; sets the detection threshold 10^(3 - d).
    #[arg(long, default_value_t = 15)]
    pub search_digits: u32,
    /// Top rung 2^k of the certification ladder for F_cot / F_tan.
    #[arg(long)]
    pub ladder_top: Option<u32>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Which table to regenerate; only 72 exists.
    #[arg(long, default_value_t = 72)]
    pub table: u32,
}

#[derive(Debug, Args)]
pub struct ClausenArgs {
    #[arg(long = "N", alias = "n", default_value_t = 50_000)]
    pub n: u64,
}

#[derive(Debug, Args)]
pub struct AccelerateArgs {
    /// Truncation of the direct sum.
    #[arg(long = "N", alias = "n", default_value_t = 100_000)]
    pub n: u64,
}
