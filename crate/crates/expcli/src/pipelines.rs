//! Figure-preset pipelines: single runs, trajectory-level comparisons,
//! occupancy tables, the uncoupled complexity scan, and the coupling sweep
//! with its complexity-information statistics.

use serde::Serialize;

use trajlab::metrics::{
    self, cumulative_counts, delta_correlation, normalized_lz, spearman, welch_t_test,
    joint_encode, Model, SymbolSequence,
};
use trajlab::qjump::{SampledState, SimParams};

use crate::config::{ExperimentConfig, ModelChoice};
use crate::output::{fmt_f64, read_emissions_csv, write_json, CsvWriter};
use crate::points::{correlation_point, run_one, simulate_point, AnalysisOpts, PointStats};
use crate::CliError;

/// Coupling values for the trajectory-level comparison.
pub const FIG1_COUPLINGS: &[f64] = &[0.0, 0.5, 3.0];
/// Coupling values for the occupancy heat-map data.
pub const FIG2_COUPLINGS: &[f64] = &[0.0, 0.1, 1.0, 3.0];
/// Fixed decay rates for the drive-strength panel of the uncoupled scan.
pub const FIG3_GAMMA_LIST: &[f64] = &[0.5, 1.0];
/// Fixed drives for the decay-rate panel.
pub const FIG3_OMEGA_LIST: &[f64] = &[1.0];
/// Logarithmic drive-to-decay grid of the collapse panel.
pub const RATIO_SCAN_MIN: f64 = 0.1;
pub const RATIO_SCAN_MAX: f64 = 20.0;
pub const RATIO_SCAN_POINTS: usize = 25;

/// The ratio scan varies drive and decay together: each ratio `r` runs at
/// `gamma = (r / RATIO_SCAN_PIVOT)^-RATIO_SCAN_EXPONENT` and
/// `omega = r * gamma`, so the scan approaches the crossover from both
/// single-parameter directions at once (the two fixed-parameter panels each
/// vary only one of them). The decay rate crosses its reference value 1 at
/// the pivot, and per-step probabilities stay within the step-size guard
/// over the whole grid.
pub const RATIO_SCAN_EXPONENT: f64 = 0.28;
pub const RATIO_SCAN_PIVOT: f64 = 1.31;

/// Log-spaced grid of `n >= 2` points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let step = (hi / lo).powf(1.0 / (n - 1) as f64);
    (0..n).map(|i| lo * step.powi(i as i32)).collect()
}

/// Parameters realizing one point of the ratio scan.
pub fn ratio_scan_params(base: &SimParams, ratio: f64) -> SimParams {
    let gamma = (ratio / RATIO_SCAN_PIVOT).powf(-RATIO_SCAN_EXPONENT);
    SimParams { omega: ratio * gamma, gamma, coupling: 0.0, ..*base }
}

fn models(cfg: &ExperimentConfig) -> Vec<Model> {
    match cfg.model {
        ModelChoice::Quantum => vec![Model::Quantum],
        ModelChoice::Classical => vec![Model::Classical],
        ModelChoice::Both => vec![Model::Quantum, Model::Classical],
    }
}

fn opts(cfg: &ExperimentConfig) -> AnalysisOpts {
    AnalysisOpts {
        transient_start: cfg.transient_start(),
        mi_mode: cfg.mi_mode,
        emission_convention: cfg.emission_convention,
    }
}

const SWEEP_COLUMNS: &str =
    "model,omega,gamma,coupling,omega_over_gamma,lz,lz_err,mi,mi_err,n_traj,steps,seed";

fn sweep_row(stats: &PointStats) -> String {
    let p = &stats.params;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        stats.model.label(),
        fmt_f64(p.omega),
        fmt_f64(p.gamma),
        fmt_f64(p.coupling),
        fmt_f64(p.omega / p.gamma),
        fmt_f64(stats.lz),
        fmt_f64(stats.lz_err),
        fmt_f64(stats.mi),
        fmt_f64(stats.mi_err),
        p.n_traj,
        p.steps,
        p.seed
    )
}

/// Write per-trajectory emissions and state samples for a non-sweep run.
pub fn run_single(cfg: &ExperimentConfig) -> Result<(), CliError> {
    cfg.validate()?;
    for model in models(cfg) {
        for idx in 0..cfg.params.n_traj as u64 {
            let rec = run_one(&cfg.params, model, cfg.emission_convention, idx)?;

            let name = format!("emissions_{}_traj{:03}.csv", model.label(), idx);
            let mut w = CsvWriter::create(cfg, "simulate", &name, "step,t,r1,r2")?;
            for t in 0..rec.r1.len() {
                w.row(&format!(
                    "{},{},{},{}",
                    t,
                    fmt_f64(t as f64 * rec.dt),
                    rec.r1[t],
                    rec.r2[t]
                ))?;
            }

            let name = format!("states_{}_traj{:03}.csv", model.label(), idx);
            let columns = match model {
                Model::Quantum => "step,t,re_ee,im_ee,re_eg,im_eg,re_ge,im_ge,re_gg,im_gg",
                Model::Classical => "step,t,s1,s2",
            };
            let mut w = CsvWriter::create(cfg, "simulate", &name, columns)?;
            for s in &rec.state_samples {
                let t = fmt_f64(s.step as f64 * rec.dt);
                match &s.state {
                    SampledState::Quantum(amps) => {
                        let mut row = format!("{},{}", s.step, t);
                        for a in amps {
                            row.push_str(&format!(",{},{}", fmt_f64(a.re), fmt_f64(a.im)));
                        }
                        w.row(&row)?;
                    }
                    SampledState::Classical { s1, s2 } => {
                        w.row(&format!("{},{},{},{}", s.step, t, s1, s2))?;
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig1Row {
    pub model: String,
    pub coupling: f64,
    /// Ensemble mean and SEM of the per-trajectory regression slope of
    /// N2 against N1.
    pub count_slope: f64,
    pub count_slope_err: f64,
    /// Ensemble mean total emissions over the full record, both channels.
    pub mean_total_events: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig1Stats {
    pub couplings: Vec<f64>,
    pub rows: Vec<Fig1Row>,
}

/// Trajectory rasters, cumulative-count pairs, and baseline-subtracted
/// correlations for a list of couplings, with seed-paired zero-coupling
/// baselines.
pub fn run_fig1(cfg: &ExperimentConfig) -> Result<Fig1Stats, CliError> {
    cfg.validate()?;
    let an = opts(cfg);
    let mut rows = Vec::new();
    let couplings = FIG1_COUPLINGS.to_vec();

    for model in models(cfg) {
        let base_params = SimParams { coupling: 0.0, ..cfg.params };
        let baseline = correlation_point(&base_params, model, &an, cfg.max_lag)?;

        for &coupling in &couplings {
            let params = SimParams { coupling, ..cfg.params };

            // Representative trajectory raster and cumulative counts.
            let rec = run_one(&params, model, cfg.emission_convention, 0)?;
            let name = format!("fig1_emissions_{}_J{}.csv", model.label(), coupling);
            let mut w = CsvWriter::create(cfg, "fig1", &name, "step,t,r1,r2")?;
            for t in 0..rec.r1.len() {
                w.row(&format!(
                    "{},{},{},{}",
                    t,
                    fmt_f64(t as f64 * rec.dt),
                    rec.r1[t],
                    rec.r2[t]
                ))?;
            }
            let (n1, n2) = cumulative_counts(&rec);
            let name = format!("fig1_counts_{}_J{}.csv", model.label(), coupling);
            let mut w = CsvWriter::create(cfg, "fig1", &name, "step,t,n1,n2")?;
            for t in 0..n1.len() {
                w.row(&format!("{},{},{},{}", t, fmt_f64(t as f64 * rec.dt), n1[t], n2[t]))?;
            }

            // Ensemble statistics: count slopes, totals, correlations.
            let mut slopes = Vec::new();
            let mut totals = Vec::new();
            for idx in 0..params.n_traj as u64 {
                let rec = run_one(&params, model, cfg.emission_convention, idx)?;
                let (n1, n2) = cumulative_counts(&rec);
                if let Some(slope) = regression_slope(&n1, &n2) {
                    slopes.push(slope);
                }
                totals.push((n1.last().copied().unwrap_or(0) + n2.last().copied().unwrap_or(0))
                    as f64);
            }
            let (slope, slope_err) = mean_sem(&slopes);
            let mean_total = totals.iter().sum::<f64>() / totals.len() as f64;

            let corr = correlation_point(&params, model, &an, cfg.max_lag)?;
            let d11 = delta_correlation(&corr.c11, &baseline.c11)
                .map_err(CliError::from_metrics)?;
            let d22 = delta_correlation(&corr.c22, &baseline.c22)
                .map_err(CliError::from_metrics)?;
            let d12 = delta_correlation(&corr.c12, &baseline.c12)
                .map_err(CliError::from_metrics)?;
            let name = format!("fig1_corr_{}_J{}.csv", model.label(), coupling);
            let mut w = CsvWriter::create(
                cfg,
                "fig1",
                &name,
                "tau,lag_steps,c11,c22,c12,dc11,dc22,dc12",
            )?;
            for (i, &lag) in corr.c11.lags.iter().enumerate() {
                w.row(&format!(
                    "{},{},{},{},{},{},{},{}",
                    fmt_f64(lag as f64 * params.dt),
                    lag,
                    fmt_f64(corr.c11.values[i]),
                    fmt_f64(corr.c22.values[i]),
                    fmt_f64(corr.c12.values[i]),
                    fmt_f64(d11.values[i]),
                    fmt_f64(d22.values[i]),
                    fmt_f64(d12.values[i]),
                ))?;
            }

            rows.push(Fig1Row {
                model: model.label().to_string(),
                coupling,
                count_slope: slope,
                count_slope_err: slope_err,
                mean_total_events: mean_total,
            });
        }
    }
    let stats = Fig1Stats { couplings, rows };
    write_json(cfg, "fig1_stats.json", &stats)?;
    Ok(stats)
}

/// Ordinary least-squares slope of `y` against `x` (with intercept);
/// `None` when `x` has no variance.
fn regression_slope(x: &[u64], y: &[u64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().map(|&v| v as f64).sum::<f64>() / n;
    let my = y.iter().map(|&v| v as f64).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxx += (a as f64 - mx).powi(2);
        sxy += (a as f64 - mx) * (b as f64 - my);
    }
    (sxx > 0.0).then(|| sxy / sxx)
}

fn mean_sem(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, Serialize)]
pub struct OccupancyRow {
    pub model: String,
    pub coupling: f64,
    /// `(p00, p01, p10, p11)`.
    pub p: [f64; 4],
    /// Seed-block SEM per entry.
    pub sem: [f64; 4],
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig2Stats {
    pub rows: Vec<OccupancyRow>,
}

/// Joint-state occupancy tables per model and coupling.
pub fn run_fig2(cfg: &ExperimentConfig) -> Result<Fig2Stats, CliError> {
    run_fig2_with_couplings(cfg, FIG2_COUPLINGS)
}

pub fn run_fig2_with_couplings(
    cfg: &ExperimentConfig,
    couplings: &[f64],
) -> Result<Fig2Stats, CliError> {
    cfg.validate()?;
    let an = opts(cfg);
    let mut w = CsvWriter::create(cfg, "fig2", "fig2_occupancy.csv", "model,coupling,p00,p01,p10,p11")?;
    let mut rows = Vec::new();
    for model in models(cfg) {
        for &coupling in couplings {
            let params = SimParams { coupling, ..cfg.params };
            let stats = simulate_point(&params, model, &an)?;
            let p = stats.occupancy.flat();
            let mut sem = [0.0; 4];
            for k in 0..4 {
                let col: Vec<f64> = stats.block_occupancy.iter().map(|b| b[k]).collect();
                sem[k] = mean_sem(&col).1;
            }
            w.row(&format!(
                "{},{},{},{},{},{}",
                model.label(),
                fmt_f64(coupling),
                fmt_f64(p[0]),
                fmt_f64(p[1]),
                fmt_f64(p[2]),
                fmt_f64(p[3])
            ))?;
            rows.push(OccupancyRow {
                model: model.label().to_string(),
                coupling,
                p,
                sem,
            });
        }
    }
    let stats = Fig2Stats { rows };
    write_json(cfg, "fig2_stats.json", &stats)?;
    Ok(stats)
}

#[derive(Debug, Clone, Serialize)]
pub struct PeakStats {
    pub model: String,
    /// Grid ratio at the complexity maximum.
    pub ratio: f64,
    pub grid_index: usize,
    pub lz: f64,
    pub lz_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig3Stats {
    pub ratio_grid: Vec<f64>,
    /// Multiplicative spacing between adjacent grid ratios.
    pub grid_step: f64,
    pub lz_quantum: Vec<f64>,
    pub lz_quantum_err: Vec<f64>,
    pub lz_classical: Vec<f64>,
    pub lz_classical_err: Vec<f64>,
    pub peaks: Vec<PeakStats>,
    /// Welch comparison of the two models' peak heights.
    pub welch_t: f64,
    pub welch_p: f64,
}

/// Uncoupled complexity scan: drive panel, decay panel, and the
/// drive-to-decay collapse panel with peak statistics.
pub fn run_fig3(cfg: &ExperimentConfig) -> Result<Fig3Stats, CliError> {
    cfg.validate()?;
    let an = opts(cfg);

    // Panel data: complexity against one parameter at fixed values of the
    // other.
    let mut w = CsvWriter::create(cfg, "fig3", "fig3_omega.csv", SWEEP_COLUMNS)?;
    for model in models(cfg) {
        for &gamma in FIG3_GAMMA_LIST {
            for omega in log_grid(0.1, 10.0, 13) {
                let params = SimParams { omega, gamma, coupling: 0.0, ..cfg.params };
                let stats = simulate_point(&params, model, &an)?;
                w.row(&sweep_row(&stats))?;
            }
        }
    }
    let mut w = CsvWriter::create(cfg, "fig3", "fig3_gamma.csv", SWEEP_COLUMNS)?;
    for model in models(cfg) {
        for &omega in FIG3_OMEGA_LIST {
            for gamma in log_grid(0.08, 4.0, 13) {
                let params = SimParams { omega, gamma, coupling: 0.0, ..cfg.params };
                let stats = simulate_point(&params, model, &an)?;
                w.row(&sweep_row(&stats))?;
            }
        }
    }

    // Collapse panel on the logarithmic ratio grid.
    let ratio_grid = log_grid(RATIO_SCAN_MIN, RATIO_SCAN_MAX, RATIO_SCAN_POINTS);
    let grid_step = ratio_grid[1] / ratio_grid[0];
    let mut w = CsvWriter::create(cfg, "fig3", "fig3_ratio.csv", SWEEP_COLUMNS)?;
    let mut curves: Vec<(Model, Vec<f64>, Vec<f64>)> = Vec::new();
    let mut peaks = Vec::new();
    for model in models(cfg) {
        let mut lz = Vec::with_capacity(ratio_grid.len());
        let mut lz_err = Vec::with_capacity(ratio_grid.len());
        for &r in &ratio_grid {
            let params = ratio_scan_params(&cfg.params, r);
            let stats = simulate_point(&params, model, &an)?;
            w.row(&sweep_row(&stats))?;
            lz.push(stats.lz);
            lz_err.push(stats.lz_err);
        }
        let peak_idx = lz
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        peaks.push(PeakStats {
            model: model.label().to_string(),
            ratio: ratio_grid[peak_idx],
            grid_index: peak_idx,
            lz: lz[peak_idx],
            lz_err: lz_err[peak_idx],
        });
        curves.push((model, lz, lz_err));
    }

    // Peak-height comparison when both models ran.
    let (welch_t, welch_p) = if peaks.len() == 2 {
        let (a, b) = (&peaks[0], &peaks[1]);
        welch_t_test(a.lz, a.lz_err, cfg.params.n_traj, b.lz, b.lz_err, cfg.params.n_traj)
            .map_err(CliError::from_metrics)?
    } else {
        (f64::NAN, f64::NAN)
    };

    let find = |m: Model| -> (Vec<f64>, Vec<f64>) {
        curves
            .iter()
            .find(|(model, _, _)| *model == m)
            .map(|(_, lz, err)| (lz.clone(), err.clone()))
            .unwrap_or_default()
    };
    let (lz_quantum, lz_quantum_err) = find(Model::Quantum);
    let (lz_classical, lz_classical_err) = find(Model::Classical);

    let stats = Fig3Stats {
        ratio_grid,
        grid_step,
        lz_quantum,
        lz_quantum_err,
        lz_classical,
        lz_classical_err,
        peaks,
        welch_t,
        welch_p,
    };
    write_json(cfg, "fig3_stats.json", &stats)?;
    Ok(stats)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpearmanRow {
    pub model: String,
    pub ratio: f64,
    pub rho: f64,
    pub p_value: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScatterStats {
    pub model: String,
    pub rho: f64,
    pub p_value: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig4Stats {
    pub coupling_grid: Vec<f64>,
    pub ratio_grid: Vec<f64>,
    /// Rank correlation of complexity against coupling, per model and ratio,
    /// over seed-block points.
    pub lz_vs_coupling: Vec<SpearmanRow>,
    /// Pooled rank correlation of mutual information against complexity
    /// over the seed-block points of the coupled cells (J > 0); the
    /// uncoupled column, where mutual information vanishes identically,
    /// is reported separately in `mi_zero_coupling`.
    pub mi_vs_lz: Vec<ScatterStats>,
    /// Mutual information at zero coupling, per model and ratio.
    pub mi_zero_coupling: Vec<(String, f64, f64, f64)>,
}

/// Coupling sweep: complexity and mutual information curves per model and
/// drive-to-decay ratio, plus the pooled complexity-information scatter.
pub fn run_fig4(cfg: &ExperimentConfig) -> Result<Fig4Stats, CliError> {
    cfg.validate()?;
    let an = opts(cfg);
    let coupling_grid = cfg.sweep.coupling.clone();
    let ratio_grid = cfg.sweep.ratio.clone();

    let mut sweep = CsvWriter::create(cfg, "fig4", "fig4_sweep.csv", SWEEP_COLUMNS)?;
    let mut scatter = CsvWriter::create(
        cfg,
        "fig4",
        "fig4_scatter.csv",
        "model,omega,gamma,coupling,omega_over_gamma,block,lz,mi",
    )?;

    let mut lz_vs_coupling = Vec::new();
    let mut mi_vs_lz = Vec::new();
    let mut mi_zero_coupling = Vec::new();

    for model in models(cfg) {
        let mut pooled_lz = Vec::new();
        let mut pooled_mi = Vec::new();
        for &ratio in &ratio_grid {
            let mut xs = Vec::new(); // coupling per block point
            let mut ys = Vec::new(); // block lz
            for &coupling in &coupling_grid {
                let params = SimParams {
                    omega: ratio * cfg.params.gamma,
                    coupling,
                    ..cfg.params
                };
                let stats = simulate_point(&params, model, &an)?;
                sweep.row(&sweep_row(&stats))?;
                for (b, (&lz, &mi)) in
                    stats.block_lz.iter().zip(&stats.block_mi).enumerate()
                {
                    scatter.row(&format!(
                        "{},{},{},{},{},{},{},{}",
                        model.label(),
                        fmt_f64(params.omega),
                        fmt_f64(params.gamma),
                        fmt_f64(coupling),
                        fmt_f64(params.omega / params.gamma),
                        b,
                        fmt_f64(lz),
                        fmt_f64(mi)
                    ))?;
                    xs.push(coupling);
                    ys.push(lz);
                    if coupling > 0.0 {
                        pooled_lz.push(lz);
                        pooled_mi.push(mi);
                    }
                }
                if coupling == 0.0 {
                    mi_zero_coupling.push((
                        model.label().to_string(),
                        ratio,
                        stats.mi,
                        stats.mi_err,
                    ));
                }
            }
            let (rho, p_value) = spearman(&xs, &ys).map_err(CliError::from_metrics)?;
            lz_vs_coupling.push(SpearmanRow {
                model: model.label().to_string(),
                ratio,
                rho,
                p_value,
                n: xs.len(),
            });
        }
        let (rho, p_value) = spearman(&pooled_lz, &pooled_mi).map_err(CliError::from_metrics)?;
        mi_vs_lz.push(ScatterStats {
            model: model.label().to_string(),
            rho,
            p_value,
            n: pooled_lz.len(),
        });
    }

    let stats = Fig4Stats {
        coupling_grid,
        ratio_grid,
        lz_vs_coupling,
        mi_vs_lz,
        mi_zero_coupling,
    };
    write_json(cfg, "fig4_stats.json", &stats)?;
    Ok(stats)
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    pub input: String,
    pub steps: usize,
    pub analyzed_steps: usize,
    pub events_r1: u64,
    pub events_r2: u64,
    pub lz_r1: f64,
    pub lz_r2: f64,
    pub lz_joint: f64,
    pub normalized_lz_joint: f64,
}

/// Recompute sequence metrics from an emissions CSV.
pub fn run_metrics(cfg: &ExperimentConfig, input: &std::path::Path) -> Result<MetricsReport, CliError> {
    let (r1, r2, dt) = read_emissions_csv(input)?;
    let steps = r1.len();
    let start = (cfg.transient_fraction * steps as f64).floor() as usize;
    if steps - start < 2 {
        return Err(CliError::Config(format!(
            "post-transient window of {} steps is too short",
            steps - start
        )));
    }
    let s1 = SymbolSequence::binary(r1[start..].to_vec()).map_err(CliError::from_metrics)?;
    let s2 = SymbolSequence::binary(r2[start..].to_vec()).map_err(CliError::from_metrics)?;
    let joint = joint_encode(&s1, &s2).map_err(CliError::from_metrics)?;

    let max_lag = cfg.max_lag.min(s1.len() - 1);
    let c11 = metrics::autocorrelation(&s1, max_lag).map_err(CliError::from_metrics)?;
    let c22 = metrics::autocorrelation(&s2, max_lag).map_err(CliError::from_metrics)?;
    let c12 = metrics::cross_correlation(&s1, &s2, max_lag).map_err(CliError::from_metrics)?;
    let dt = if dt > 0.0 { dt } else { cfg.params.dt };
    let mut w = CsvWriter::create(
        cfg,
        "metrics",
        "metrics_corr.csv",
        "tau,lag_steps,c11,c22,c12,dc11,dc22,dc12",
    )?;
    for (i, &lag) in c11.lags.iter().enumerate() {
        w.row(&format!(
            "{},{},{},{},{},0,0,0",
            fmt_f64(lag as f64 * dt),
            lag,
            fmt_f64(c11.values[i]),
            fmt_f64(c22.values[i]),
            fmt_f64(c12.values[i]),
        ))?;
    }

    let report = MetricsReport {
        input: input.display().to_string(),
        steps,
        analyzed_steps: steps - start,
        events_r1: s1.symbols().iter().map(|&b| b as u64).sum(),
        events_r2: s2.symbols().iter().map(|&b| b as u64).sum(),
        lz_r1: metrics::lz_complexity(&s1).map_err(CliError::from_metrics)? as f64,
        lz_r2: metrics::lz_complexity(&s2).map_err(CliError::from_metrics)? as f64,
        lz_joint: metrics::lz_complexity(&joint).map_err(CliError::from_metrics)? as f64,
        normalized_lz_joint: normalized_lz(&joint).map_err(CliError::from_metrics)?,
    };
    write_json(cfg, "metrics_summary.json", &report)?;
    Ok(report)
}
