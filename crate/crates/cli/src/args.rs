use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::dataset::Format;
use crate::quantity::{self, Quantity};

#[derive(Debug, Parser)]
#[command(
    name = "itlab",
    about = "Time-of-flight imaging of fragment momentum distributions",
    disable_version_flag = true
)]
pub struct Cli {
    /// Print the version and exit.
    #[arg(short = 'V', long)]
    pub version: bool,

    /// With --version, also print the physical constants in use.
    #[arg(long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact, imaging-limit and classical time spectra at the detector.
    Timespectrum(TimeSpectrumArgs),
    /// Momentum distribution extracted from the exact time spectrum.
    Momentum(MomentumArgs),
    /// Seeded event simulation, histogram and momentum reconstruction.
    Simulate(SimulateArgs),
    /// Classical trajectory fans and the momentum/position Jacobian.
    Trajectories(TrajectoryArgs),
    /// Quick numerical identity checks.
    Selfcheck,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Vibrational quantum number [default depends on subcommand].
    #[arg(long)]
    pub n: Option<u32>,
    /// Reduced mass in atomic units.
    #[arg(long, default_value = "918", value_parser = quantity::atomic)]
    pub mu: f64,
    /// Oscillator frequency in atomic units.
    #[arg(long, default_value = "0.01", value_parser = quantity::atomic)]
    pub omega: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ModeArgs {
    /// Constant extraction force, e.g. 1eV/cm; zero means free flight.
    #[arg(long, value_parser = quantity::force, conflicts_with = "boost", allow_hyphen_values = true)]
    pub field: Option<Quantity>,
    /// Centre-of-mass momentum, e.g. 25au.
    #[arg(long, value_parser = quantity::momentum, allow_hyphen_values = true)]
    pub boost: Option<Quantity>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct TimeSpectrumArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Detector distance, e.g. 2a0 or 20cm [default: 2a0, or 5a0 with --boost].
    #[arg(long, value_parser = quantity::length)]
    pub zf: Option<Quantity>,
    #[command(flatten)]
    pub mode: ModeArgs,
    #[arg(long, default_value = "10au", value_parser = quantity::time)]
    pub t_min: Quantity,
    #[arg(long, default_value = "10000au", value_parser = quantity::time)]
    pub t_max: Quantity,
    #[arg(long, default_value_t = 1000)]
    pub t_points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MomentumGrid {
    #[arg(long, default_value = "-8au", value_parser = quantity::momentum, allow_hyphen_values = true)]
    pub p_min: Quantity,
    #[arg(long, default_value = "8au", value_parser = quantity::momentum, allow_hyphen_values = true)]
    pub p_max: Quantity,
    #[arg(long, default_value_t = 321)]
    pub p_points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct MomentumArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Detector distance, e.g. 2a0 or 20cm [default: 2a0, or 5a0 with --boost].
    #[arg(long, value_parser = quantity::length)]
    pub zf: Option<Quantity>,
    #[command(flatten)]
    pub mode: ModeArgs,
    #[command(flatten)]
    pub grid: MomentumGrid,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value = "20cm", value_parser = quantity::length)]
    pub zf: Quantity,
    #[command(flatten)]
    pub mode: ModeArgs,
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Histogram bin width [default: 0.01us with a field, 1us otherwise].
    #[arg(long, value_parser = quantity::time)]
    pub bins: Option<Quantity>,
    #[command(flatten)]
    pub grid: MomentumGrid,
    /// Output directory for the events, histogram and reconstruction files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct TrajectoryArgs {
    #[arg(long, default_value = "918", value_parser = quantity::atomic)]
    pub mu: f64,
    /// Nominal initial momentum at the centre of the z(t) fan.
    #[arg(long, default_value = "1au", value_parser = quantity::momentum, allow_hyphen_values = true)]
    pub p_i: Quantity,
    #[arg(long, default_value = "0.5au", value_parser = quantity::momentum)]
    pub p_spread: Quantity,
    /// Nominal detector distance at the centre of the p_i(t) fan.
    #[arg(long, default_value = "2a0", value_parser = quantity::length)]
    pub zf: Quantity,
    #[arg(long, default_value = "1a0", value_parser = quantity::length)]
    pub z_spread: Quantity,
    #[arg(long, default_value_t = 5)]
    pub curves: usize,
    /// Time at which the fans end and the Jacobian rectangle is taken.
    #[arg(long, default_value = "2000au", value_parser = quantity::time)]
    pub t: Quantity,
    #[arg(long, default_value_t = 101)]
    pub t_points: usize,
    /// Detector-position extent of the Jacobian rectangle.
    #[arg(long, default_value = "0.2a0", value_parser = quantity::length)]
    pub dz: Quantity,
    #[command(flatten)]
    pub mode: ModeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
