use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use expcli::config::{
    parse_config, parse_emission_convention, ExperimentConfig, MiMode, ModelChoice, Overrides,
};
use expcli::pipelines;
use expcli::CliError;

#[derive(Parser)]
#[command(
    name = "expcli",
    version,
    about = "Emission-trajectory experiments on a driven-dissipative two-qubit \
             jump model and a rate-matched classical telegraph model",
    after_help = "Defaults: omega=1, gamma=1, coupling=0, beta=1, dt=0.01, \
                  steps=100000, n-traj=200, seed=1, sample-stride=10, \
                  max-lag=200, transient=0.2, model=both, \
                  emission-convention=any-flip, mi-mode=ensemble, out=out. \
                  Flags override config-file values, which override defaults."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct CommonFlags {
    /// Model to run: quantum, classical or both
    #[arg(long)]
    model: Option<String>,
    /// Rabi drive amplitude
    #[arg(long)]
    omega: Option<f64>,
    /// Per-qubit decay rate
    #[arg(long)]
    gamma: Option<f64>,
    /// Ising coupling strength J
    #[arg(long)]
    coupling: Option<f64>,
    /// Classical bias scale factor
    #[arg(long)]
    beta: Option<f64>,
    /// Time step
    #[arg(long)]
    dt: Option<f64>,
    /// Steps per trajectory
    #[arg(long)]
    steps: Option<usize>,
    /// Ensemble size
    #[arg(long = "n-traj")]
    n_traj: Option<usize>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    /// State-sampling period in steps
    #[arg(long = "sample-stride")]
    sample_stride: Option<usize>,
    /// Largest correlation lag in steps
    #[arg(long = "max-lag")]
    max_lag: Option<usize>,
    /// Discarded warm-up fraction in [0, 1)
    #[arg(long)]
    transient: Option<f64>,
    /// Classical emission convention: any-flip or down-flip
    #[arg(long = "emission-convention")]
    emission_convention: Option<String>,
    /// Mutual-information estimator: ensemble or per-trajectory
    #[arg(long = "mi-mode")]
    mi_mode: Option<String>,
    /// JSON config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write per-trajectory emissions and state samples
    Simulate(CommonFlags),
    /// Trajectory rasters, cumulative counts, baseline-subtracted correlations
    Fig1(CommonFlags),
    /// Joint-state occupancy tables over a coupling list
    Fig2(CommonFlags),
    /// Uncoupled complexity scan with peak statistics
    Fig3(CommonFlags),
    /// Coupling sweep with complexity-information statistics
    Fig4(CommonFlags),
    /// Recompute sequence metrics from an emissions CSV
    Metrics {
        /// Emissions CSV (schema step,t,r1,r2)
        input: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
}

fn resolve(flags: &CommonFlags) -> Result<ExperimentConfig, CliError> {
    let overrides = Overrides {
        omega: flags.omega,
        gamma: flags.gamma,
        coupling: flags.coupling,
        beta: flags.beta,
        dt: flags.dt,
        steps: flags.steps,
        n_traj: flags.n_traj,
        seed: flags.seed,
        sample_stride: flags.sample_stride,
        model: flags.model.as_deref().map(ModelChoice::parse).transpose()?,
        transient: flags.transient,
        max_lag: flags.max_lag,
        out: flags.out.clone(),
        emission_convention: flags
            .emission_convention
            .as_deref()
            .map(parse_emission_convention)
            .transpose()?,
        mi_mode: flags.mi_mode.as_deref().map(MiMode::parse).transpose()?,
    };
    parse_config(flags.config.as_deref(), &overrides)
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Simulate(flags) => {
            let cfg = resolve(flags)?;
            pipelines::run_single(&cfg)?;
            println!("wrote per-trajectory records to {}", cfg.output_dir.display());
        }
        Command::Fig1(flags) => {
            let cfg = resolve(flags)?;
            let stats = pipelines::run_fig1(&cfg)?;
            for row in &stats.rows {
                println!(
                    "{} J={}: N2-vs-N1 slope {:.3} +- {:.3}, mean events {:.1}",
                    row.model, row.coupling, row.count_slope, row.count_slope_err,
                    row.mean_total_events
                );
            }
        }
        Command::Fig2(flags) => {
            let cfg = resolve(flags)?;
            let stats = pipelines::run_fig2(&cfg)?;
            for row in &stats.rows {
                println!(
                    "{} J={}: p = [{:.3}, {:.3}, {:.3}, {:.3}]",
                    row.model, row.coupling, row.p[0], row.p[1], row.p[2], row.p[3]
                );
            }
        }
        Command::Fig3(flags) => {
            let cfg = resolve(flags)?;
            let stats = pipelines::run_fig3(&cfg)?;
            for peak in &stats.peaks {
                println!(
                    "{} peak: ratio {:.3}, LZ {:.4} +- {:.4}",
                    peak.model, peak.ratio, peak.lz, peak.lz_err
                );
            }
            if stats.welch_p.is_finite() {
                println!("peak-height Welch t = {:.3}, p = {:.3}", stats.welch_t, stats.welch_p);
            }
        }
        Command::Fig4(flags) => {
            let cfg = resolve(flags)?;
            let stats = pipelines::run_fig4(&cfg)?;
            for row in &stats.lz_vs_coupling {
                println!(
                    "{} ratio {}: Spearman(LZ, J) = {:.3} (p = {:.2e}, n = {})",
                    row.model, row.ratio, row.rho, row.p_value, row.n
                );
            }
            for s in &stats.mi_vs_lz {
                println!(
                    "{} pooled MI-vs-LZ: rho = {:.3} (p = {:.2e}, n = {})",
                    s.model, s.rho, s.p_value, s.n
                );
            }
        }
        Command::Metrics { input, flags } => {
            let cfg = resolve(flags)?;
            let report = pipelines::run_metrics(&cfg, input)?;
            println!(
                "{}: {} steps analyzed, events ({}, {}), joint LZ {} (normalized {:.5})",
                report.input,
                report.analyzed_steps,
                report.events_r1,
                report.events_r2,
                report.lz_joint,
                report.normalized_lz_joint
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
