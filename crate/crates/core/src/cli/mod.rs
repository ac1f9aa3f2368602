//! `pmcorr` command-line front end.

pub mod commands;
pub mod config;
pub mod figures;
pub mod output;

use std::io;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::error::Error;
use config::ParamArgs;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("row {index} ({axis} = {value:e}): {source}")]
    Row {
        index: usize,
        axis: &'static str,
        value: f64,
        source: Error,
    },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 for rejected input, 3 for numerical failure, 4 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(e) | CliError::Row { source: e, .. } => {
                if e.is_numerical() {
                    3
                } else {
                    2
                }
            }
            CliError::Io { .. } => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Svg,
}

#[derive(Debug, Parser)]
#[command(name = "pmcorr", version, about = "Purity, Fisher information and thermometry for correlated Gaussian probes")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// key = value parameter file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when absent); for `figures`, the output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Suppress the manifest on stderr and progress notes
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepTargetArg {
    Gamma,
    Lambda,
    Purity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Gamma,
    Lambda,
    Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Gamma,
    Lambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    #[value(name = "figD")]
    FigD,
    #[value(name = "figE")]
    FigE,
    All,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub axis: AxisArg,
    /// Quantity whose information is reported
    #[arg(long, value_enum, default_value_t = SweepTargetArg::Gamma)]
    pub target: SweepTargetArg,
    /// Axis start (time axis accepts unit suffixes)
    #[arg(long, allow_negative_numbers = true)]
    pub min: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub max: Option<String>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Shorthand for --scale log
    #[arg(long, conflicts_with = "scale")]
    pub log: bool,
    #[arg(long, value_enum)]
    pub scale: Option<ScaleArg>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    /// Comma-separated correlations
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub gammas: Option<Vec<f64>>,
    /// Aligned text table instead of CSV
    #[arg(long)]
    pub pretty: bool,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("direction").required(true))]
pub struct ConvertArgs {
    /// Temperature in K to convert into Λ
    #[arg(long, group = "direction", allow_negative_numbers = true)]
    pub to_lambda: Option<f64>,
    /// Λ in m⁻²s⁻¹ to convert into a temperature
    #[arg(long, group = "direction", allow_negative_numbers = true)]
    pub to_temp: Option<f64>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    #[arg(long, value_enum, default_value_t = Preset::All)]
    pub preset: Preset,
    /// Output directory (defaults to --out, then `figures`)
    #[arg(long)]
    pub outdir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LensArgs {
    /// Peak Rabi frequency, rad/s
    #[arg(long, default_value_t = 1e9)]
    pub omega0: f64,
    /// Laser wavelength (m; nm suffix accepted)
    #[arg(long, default_value = "1064nm")]
    pub wavelength: String,
    /// Detuning ω − ω0, rad/s
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub detuning: f64,
    /// Centre-of-mass speed, m/s
    #[arg(long, default_value_t = 100.0)]
    pub v_cm: f64,
    /// Effective interaction time (s; suffixes accepted)
    #[arg(long, default_value = "10us")]
    pub t_int: String,
    /// Evaluation point across the standing wave (m; suffixes accepted)
    #[arg(long, default_value = "0", allow_negative_numbers = true)]
    pub x: String,
    /// Evaluation point along the beam (m; suffixes accepted)
    #[arg(long, default_value = "0", allow_negative_numbers = true)]
    pub z: String,
    /// Wavefront curvature radius for the γ map (m; suffixes accepted)
    #[arg(long, allow_negative_numbers = true)]
    pub curvature: Option<String>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct FisherArgs {
    #[arg(long, value_enum, default_value_t = TargetArg::Gamma)]
    pub target: TargetArg,
    /// Repetitions for the Cramér-Rao bound
    #[arg(long, default_value_t = 1)]
    pub repeats: u64,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Purity and Fisher information along one parameter axis
    Sweep(SweepArgs),
    /// Temporal-gain table with residuals against the reference rows
    Table1(Table1Args),
    /// Temperature to scattering constant and back
    Convert(ConvertArgs),
    /// Data sets behind each figure
    Figures(FiguresArgs),
    /// Standing-wave lens calculators
    Lens(LensArgs),
    /// Purity, covariance and kernel at one point
    Purity(PointArgs),
    /// Quantum Fisher information at one point
    Qfi(FisherArgs),
    /// Classical Fisher information (position measurement) at one point
    Cfi(FisherArgs),
    /// Purity-rate maximum and temporal gain of information
    Tgi(PointArgs),
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Sweep(a) => commands::sweep(g, a),
        Command::Table1(a) => commands::table1(g, a),
        Command::Convert(a) => commands::convert(g, a),
        Command::Figures(a) => figures::run(g, a),
        Command::Lens(a) => commands::lens(g, a),
        Command::Purity(a) => commands::purity(g, a),
        Command::Qfi(a) => commands::qfi(g, a),
        Command::Cfi(a) => commands::cfi(g, a),
        Command::Tgi(a) => commands::tgi(g, a),
    }
}
