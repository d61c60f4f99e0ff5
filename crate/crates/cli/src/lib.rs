//! Command-line orchestration for qdbell runs: configure, simulate, analyze.

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qdbell", version, about = "Entangled photon pair source simulation and Bell-test analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate detection events from a run configuration.
    Simulate(SimulateArgs),
    /// Degrees of correlation, fidelity and two-setting Bell parameters.
    Bell(AnalysisArgs),
    /// Four-setting CHSH value from the `chsh-*` settings.
    Chsh(AnalysisArgs),
    /// Fit (or simulate and fit) a fine-structure splitting scan.
    Splitting(SplittingArgs),
    /// Fidelity and Bell parameters against gate width.
    GateSweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateMode {
    On,
    Off,
    /// Report ungated and gated results side by side.
    Both,
}

/// A fixed seed, or `random` for one drawn from the OS.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedArg {
    Fixed(u64),
    Random,
}

fn parse_seed(s: &str) -> Result<SeedArg, String> {
    if s == "random" {
        Ok(SeedArg::Random)
    } else {
        s.parse()
            .map(SeedArg::Fixed)
            .map_err(|_| format!("expected an unsigned integer or `random`, got {s:?}"))
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Run configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Event file to write; defaults to the configuration's `events_out`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the configured seed; `random` draws a fresh one.
    #[arg(long, value_parser = parse_seed)]
    pub seed: Option<SeedArg>,
    /// Append each event's origin (dot, bg, dark, reexc) as a sixth column.
    #[arg(long)]
    pub with_origin: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GateArgs {
    /// Run configuration whose `gate_*` keys set the windows.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Biexciton window width.
    #[arg(long)]
    pub gate_xx_ns: Option<f64>,
    /// Exciton window width.
    #[arg(long)]
    pub gate_x_ns: Option<f64>,
    /// Biexciton window centre; defaults to the arrival-time peak.
    #[arg(long)]
    pub gate_xx_center_ns: Option<f64>,
    /// Exciton window centre; defaults to the arrival-time peak.
    #[arg(long)]
    pub gate_x_center_ns: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnalysisArgs {
    /// Event file written by `simulate`.
    pub events: PathBuf,
    #[arg(long, value_enum, default_value_t = GateMode::Both)]
    pub gate: GateMode,
    #[command(flatten)]
    pub windows: GateArgs,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
}

#[derive(Debug, Args)]
pub struct SplittingArgs {
    /// Scan file (`angle_deg,delta_E_ueV,sigma_ueV`) to fit.
    #[arg(long, conflicts_with = "simulate_uev")]
    pub scan: Option<PathBuf>,
    /// Simulate a scan with this splitting instead of reading one.
    #[arg(long = "simulate-ueV", required_unless_present = "scan")]
    pub simulate_uev: Option<f64>,
    /// Per-point noise of the simulated scan.
    #[arg(long = "noise-ueV", default_value_t = 0.06)]
    pub noise_uev: f64,
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    #[arg(long, default_value_t = 0.0)]
    pub phase_deg: f64,
    #[arg(long, value_parser = parse_seed)]
    pub seed: Option<SeedArg>,
    /// Also write the simulated scan here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub events: PathBuf,
    /// Biexciton window widths to try, comma-separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 12.5])]
    pub widths_ns: Vec<f64>,
    #[command(flatten)]
    pub windows: GateArgs,
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    pub report: ReportFormat,
}

/// Runs one command, writing its report to `out`.
pub fn run(cli: Cli, out: &mut dyn std::io::Write) -> anyhow::Result<()> {
    match cli.command {
        Command::Simulate(a) => commands::simulate(&a, out),
        Command::Bell(a) => commands::bell(&a, out),
        Command::Chsh(a) => commands::chsh(&a, out),
        Command::Splitting(a) => commands::splitting(&a, out),
        Command::GateSweep(a) => commands::gate_sweep(&a, out),
    }
}
