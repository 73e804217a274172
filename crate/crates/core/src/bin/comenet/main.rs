use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Debug, Parser)]
#[command(
    name = "comenet",
    version,
    about = "Complete per-edge geometry for 3D molecular graphs"
)]
pub struct Cli {
    /// Radius-graph cutoff in Å (default 5.0 for files, the bond cutoff for bundled fixtures)
    #[arg(long, global = true, env = "COMENET_CUTOFF")]
    pub cutoff: Option<f64>,

    #[arg(long, global = true, env = "COMENET_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Override the check tolerance of the subcommand
    #[arg(long, global = true, env = "COMENET_TOLERANCE")]
    pub tolerance: Option<f64>,

    #[arg(long, global = true, env = "COMENET_FORMAT", value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[arg(long, global = true, env = "COMENET_QUIET")]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute (d, θ, φ, τ) for every directed edge of an XYZ structure
    Featurize(FeaturizeArgs),
    /// Rebuild coordinates from a tuple file and a topology
    Reconstruct(ReconstructArgs),
    /// Check rigid-motion invariance and the reconstruction round trip
    Invariance(InvarianceArgs),
    /// Compare butane conformers with and without rotation angles
    Conformers(ConformersArgs),
    /// Run the fixed-weight network on a structure
    Predict(PredictArgs),
    /// Measure tuple and triplet counts and featurization times
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    pub input: PathBuf,
    /// Tuple output (stdout if omitted)
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Write per-edge TBF/SBF vectors as JSON
    #[arg(long)]
    pub basis: Option<PathBuf>,
    /// Write the Bessel root table as CSV
    #[arg(long)]
    pub beta_table: Option<PathBuf>,
    /// Write the graph topology as JSON
    #[arg(long)]
    pub topology_out: Option<PathBuf>,
    #[arg(long, default_value_t = comenet::basis::DEFAULT_NUM_RADIAL)]
    pub num_radial: usize,
    #[arg(long, default_value_t = comenet::basis::DEFAULT_NUM_SPHERICAL)]
    pub num_spherical: usize,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Tuple CSV or JSON
    #[arg(long)]
    pub tuples: PathBuf,
    /// Topology JSON
    #[arg(long)]
    pub topology: PathBuf,
    /// Source structure to align against
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Rebuilt XYZ (stdout if omitted)
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// JSON report
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InvarianceArgs {
    pub input: Option<PathBuf>,
    /// A bundled fixture by name, or `all`
    #[arg(long, conflicts_with = "input")]
    pub fixture: Option<String>,
    /// Generate a random connected graph: N K SEED
    #[arg(long, num_args = 3, value_names = ["N", "K", "SEED"], conflicts_with_all = ["input", "fixture"])]
    pub random: Option<Vec<String>>,
    /// Random rigid motions per structure
    #[arg(long, default_value_t = 10)]
    pub trials: u64,
    /// Also compare each structure with its mirror image
    #[arg(long)]
    pub mirror: bool,
}

#[derive(Debug, Args)]
pub struct ConformersArgs {
    /// C1–C2–C3–C4 dihedrals in degrees
    #[arg(long, num_args = 1.., default_values_t = comenet::fixtures::CONFORMER_ANGLES)]
    pub angles: Vec<f64>,
    /// Multi-frame XYZ of conformers to compare instead of butane
    #[arg(long, conflicts_with = "angles")]
    pub input: Option<PathBuf>,
    /// Ignore rotation angles
    #[arg(long)]
    pub no_tau: bool,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub layers: usize,
    #[arg(long, default_value_t = 64)]
    pub hidden: usize,
    #[arg(long, default_value_t = comenet::basis::DEFAULT_NUM_RADIAL)]
    pub num_radial: usize,
    #[arg(long, default_value_t = comenet::basis::DEFAULT_NUM_SPHERICAL)]
    pub num_spherical: usize,
    #[arg(long)]
    pub no_tau: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "chain")]
    pub generator: comenet::bench::Generator,
    #[arg(long, num_args = 1.., default_values_t = [1000usize, 2000, 4000, 8000])]
    pub n_values: Vec<usize>,
    #[arg(long, default_value_t = 8)]
    pub k_fixed: usize,
    #[arg(long, num_args = 1.., default_values_t = [8usize, 16, 32, 64])]
    pub k_values: Vec<usize>,
    #[arg(long, default_value_t = 2000)]
    pub n_fixed: usize,
    #[arg(long, default_value_t = comenet::bench::DEFAULT_REPETITIONS)]
    pub repetitions: usize,
    /// Counts only
    #[arg(long)]
    pub no_timing: bool,
    /// Generate and count scenarios in parallel (timing stays sequential)
    #[arg(long)]
    pub parallel_counts: bool,
    /// JSON report path
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Raw timing samples as CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
