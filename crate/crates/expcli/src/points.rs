//! Per-point ensemble execution: run the trajectories of one parameter
//! point in parallel, reduce each to a small summary, and aggregate
//! deterministically in trajectory order.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use trajlab::matkit::CMatrix;
use trajlab::metrics::{
    self, joint_encode, normalized_lz, CorrelationSeries, Model, OccupancyTable, SymbolSequence,
};
use trajlab::qjump::{
    self, pure_state_mutual_information, quantum_mutual_information, run_trajectory,
    EmissionRecord, SampledState, SimParams,
};
use trajlab::telegraph::{
    classical_mutual_information, run_trajectory_classical_with, EmissionConvention,
};

use crate::config::MiMode;
use crate::CliError;

/// Seed blocks used for standard errors of ensemble-level quantities.
pub const ERROR_BLOCKS: usize = 10;

/// Analysis settings shared by every pipeline point.
#[derive(Debug, Clone, Copy)]
pub struct AnalysisOpts {
    pub transient_start: usize,
    pub mi_mode: MiMode,
    pub emission_convention: EmissionConvention,
}

/// Everything a sweep needs from one (model, parameter) point.
#[derive(Debug, Clone)]
pub struct PointStats {
    pub model: Model,
    pub params: SimParams,
    pub lz: f64,
    pub lz_err: f64,
    pub mi: f64,
    pub mi_err: f64,
    /// Per-step emission rate per channel over the analysis window.
    pub rate1: f64,
    pub rate2: f64,
    pub rate1_err: f64,
    pub rate2_err: f64,
    /// Seed-block means, for scatter and rank statistics.
    pub block_lz: Vec<f64>,
    pub block_mi: Vec<f64>,
    pub occupancy: OccupancyTable,
    pub block_occupancy: Vec<[f64; 4]>,
}

struct TrajSummary {
    lz: f64,
    events1: u64,
    events2: u64,
    rho_sum: CMatrix,
    sample_count: usize,
    occ_counts: [u64; 4],
    mi_traj: f64,
}

fn summarize(rec: &EmissionRecord, opts: &AnalysisOpts) -> Result<TrajSummary, CliError> {
    let start = opts.transient_start;
    let r1 = SymbolSequence::binary(rec.r1[start..].to_vec()).map_err(CliError::from_metrics)?;
    let r2 = SymbolSequence::binary(rec.r2[start..].to_vec()).map_err(CliError::from_metrics)?;
    let joint = joint_encode(&r1, &r2).map_err(CliError::from_metrics)?;
    let lz = normalized_lz(&joint).map_err(CliError::from_metrics)?;

    let events1 = r1.symbols().iter().map(|&b| b as u64).sum();
    let events2 = r2.symbols().iter().map(|&b| b as u64).sum();

    let mut rho_sum = CMatrix::zeros(4);
    let mut occ_counts = [0u64; 4];
    let mut sample_count = 0usize;
    let mut mi_acc = 0.0;
    for s in &rec.state_samples {
        if s.step <= start {
            continue;
        }
        match &s.state {
            SampledState::Quantum(amps) => {
                rho_sum.accumulate_outer(amps);
                if opts.mi_mode == MiMode::PerTrajectory {
                    mi_acc += pure_state_mutual_information(amps).map_err(CliError::from_sim)?;
                }
            }
            SampledState::Classical { s1, s2 } => {
                occ_counts[(*s1 as usize) * 2 + *s2 as usize] += 1;
            }
        }
        sample_count += 1;
    }
    if sample_count == 0 {
        return Err(CliError::Config(
            "no state samples in the post-transient window; lower sample_stride".into(),
        ));
    }
    let mi_traj = match opts.mi_mode {
        MiMode::PerTrajectory => match model_of(rec) {
            Model::Quantum => mi_acc / sample_count as f64,
            Model::Classical => {
                let occ = occupancy_from_counts(&occ_counts)?;
                classical_mutual_information(&occ).map_err(CliError::from_metrics)?
            }
        },
        MiMode::Ensemble => 0.0,
    };
    Ok(TrajSummary { lz, events1, events2, rho_sum, sample_count, occ_counts, mi_traj })
}

fn model_of(rec: &EmissionRecord) -> Model {
    match rec.state_samples.first().map(|s| &s.state) {
        Some(SampledState::Classical { .. }) => Model::Classical,
        _ => Model::Quantum,
    }
}

fn occupancy_from_counts(counts: &[u64; 4]) -> Result<OccupancyTable, CliError> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(CliError::Config("empty occupancy sample".into()));
    }
    let p = [
        [counts[0] as f64 / total as f64, counts[1] as f64 / total as f64],
        [counts[2] as f64 / total as f64, counts[3] as f64 / total as f64],
    ];
    OccupancyTable::from_probabilities(p).map_err(CliError::from_metrics)
}

fn mean_sem(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Balanced block index for trajectory `i` of `n`.
fn block_of(i: usize, n: usize, blocks: usize) -> usize {
    i * blocks / n
}

/// Run one parameter point for one model and reduce it.
pub fn simulate_point(
    params: &SimParams,
    model: Model,
    opts: &AnalysisOpts,
) -> Result<PointStats, CliError> {
    params.validate().map_err(CliError::from_sim)?;
    let summaries: Vec<TrajSummary> = (0..params.n_traj as u64)
        .into_par_iter()
        .map(|i| -> Result<TrajSummary, CliError> {
            let rec = match model {
                Model::Quantum => run_trajectory(params, i).map_err(CliError::from_sim)?,
                Model::Classical => {
                    run_trajectory_classical_with(params, i, opts.emission_convention)
                        .map_err(CliError::from_sim)?
                }
            };
            summarize(&rec, opts)
        })
        .collect::<Result<_, _>>()?;

    let n = summaries.len();
    let blocks = ERROR_BLOCKS.min(n);
    let window_len = (params.steps - opts.transient_start) as f64;

    let lz_values: Vec<f64> = summaries.iter().map(|s| s.lz).collect();
    let (lz, lz_err) = mean_sem(&lz_values);
    let rates1: Vec<f64> = summaries.iter().map(|s| s.events1 as f64 / window_len).collect();
    let rates2: Vec<f64> = summaries.iter().map(|s| s.events2 as f64 / window_len).collect();
    let (rate1, rate1_err) = mean_sem(&rates1);
    let (rate2, rate2_err) = mean_sem(&rates2);

    let mut block_lz = vec![0.0; blocks];
    let mut block_n = vec![0usize; blocks];
    for (i, s) in summaries.iter().enumerate() {
        let b = block_of(i, n, blocks);
        block_lz[b] += s.lz;
        block_n[b] += 1;
    }
    for b in 0..blocks {
        block_lz[b] /= block_n[b] as f64;
    }

    // Mutual information and occupancy, per mode and model.
    let (mi, mi_err, block_mi) = match opts.mi_mode {
        MiMode::PerTrajectory => {
            let mi_values: Vec<f64> = summaries.iter().map(|s| s.mi_traj).collect();
            let (mi, mi_err) = mean_sem(&mi_values);
            let mut bm = vec![0.0; blocks];
            for (i, s) in summaries.iter().enumerate() {
                bm[block_of(i, n, blocks)] += s.mi_traj;
            }
            for b in 0..blocks {
                bm[b] /= block_n[b] as f64;
            }
            (mi, mi_err, bm)
        }
        MiMode::Ensemble => match model {
            Model::Quantum => {
                let mut block_rho = vec![CMatrix::zeros(4); blocks];
                let mut block_count = vec![0usize; blocks];
                for (i, s) in summaries.iter().enumerate() {
                    let b = block_of(i, n, blocks);
                    block_rho[b] = block_rho[b].add(&s.rho_sum);
                    block_count[b] += s.sample_count;
                }
                let mut full = CMatrix::zeros(4);
                let mut full_count = 0usize;
                let mut bm = Vec::with_capacity(blocks);
                for b in 0..blocks {
                    full = full.add(&block_rho[b]);
                    full_count += block_count[b];
                    let rho = block_rho[b].scale(C64::new(1.0 / block_count[b] as f64, 0.0));
                    bm.push(quantum_mutual_information(&rho).map_err(CliError::from_sim)?);
                }
                let rho = full.scale(C64::new(1.0 / full_count as f64, 0.0));
                let mi = quantum_mutual_information(&rho).map_err(CliError::from_sim)?;
                let (_, sem) = mean_sem(&bm);
                (mi, sem, bm)
            }
            Model::Classical => {
                let mut block_counts = vec![[0u64; 4]; blocks];
                for (i, s) in summaries.iter().enumerate() {
                    let b = block_of(i, n, blocks);
                    for (t, &c) in block_counts[b].iter_mut().zip(&s.occ_counts) {
                        *t += c;
                    }
                }
                let mut total = [0u64; 4];
                let mut bm = Vec::with_capacity(blocks);
                for bc in &block_counts {
                    for (t, &c) in total.iter_mut().zip(bc) {
                        *t += c;
                    }
                    let occ = occupancy_from_counts(bc)?;
                    bm.push(classical_mutual_information(&occ).map_err(CliError::from_metrics)?);
                }
                let occ = occupancy_from_counts(&total)?;
                let mi = classical_mutual_information(&occ).map_err(CliError::from_metrics)?;
                let (_, sem) = mean_sem(&bm);
                (mi, sem, bm)
            }
        },
    };

    // Occupancy table (full and per block), computational-basis diagonal
    // for the quantum model.
    let (occupancy, block_occupancy) = match model {
        Model::Quantum => {
            let mut full = CMatrix::zeros(4);
            let mut count = 0usize;
            let mut block_rho = vec![CMatrix::zeros(4); blocks];
            let mut block_count = vec![0usize; blocks];
            for (i, s) in summaries.iter().enumerate() {
                let b = block_of(i, n, blocks);
                block_rho[b] = block_rho[b].add(&s.rho_sum);
                block_count[b] += s.sample_count;
                full = full.add(&s.rho_sum);
                count += s.sample_count;
            }
            let rho = full.scale(C64::new(1.0 / count as f64, 0.0));
            let occ = qjump::occupancy_from_density(&rho).map_err(CliError::from_sim)?;
            let mut per_block = Vec::with_capacity(blocks);
            for b in 0..blocks {
                let rho = block_rho[b].scale(C64::new(1.0 / block_count[b] as f64, 0.0));
                per_block
                    .push(qjump::occupancy_from_density(&rho).map_err(CliError::from_sim)?.flat());
            }
            (occ, per_block)
        }
        Model::Classical => {
            let mut total = [0u64; 4];
            let mut block_counts = vec![[0u64; 4]; blocks];
            for (i, s) in summaries.iter().enumerate() {
                let b = block_of(i, n, blocks);
                for k in 0..4 {
                    block_counts[b][k] += s.occ_counts[k];
                    total[k] += s.occ_counts[k];
                }
            }
            let occ = occupancy_from_counts(&total)?;
            let mut per_block = Vec::with_capacity(blocks);
            for bc in &block_counts {
                per_block.push(occupancy_from_counts(bc)?.flat());
            }
            (occ, per_block)
        }
    };

    Ok(PointStats {
        model,
        params: *params,
        lz,
        lz_err,
        mi,
        mi_err,
        rate1,
        rate2,
        rate1_err,
        rate2_err,
        block_lz,
        block_mi,
        occupancy,
        block_occupancy,
    })
}

/// Ensemble-averaged auto- and cross-correlations over the analysis window,
/// with across-trajectory standard errors.
#[derive(Debug, Clone)]
pub struct CorrelationStats {
    pub c11: CorrelationSeries,
    pub c22: CorrelationSeries,
    pub c12: CorrelationSeries,
    pub c11_err: Vec<f64>,
    pub c22_err: Vec<f64>,
    pub c12_err: Vec<f64>,
    pub mean_r1: f64,
    pub mean_r2: f64,
}

pub fn correlation_point(
    params: &SimParams,
    model: Model,
    opts: &AnalysisOpts,
    max_lag: usize,
) -> Result<CorrelationStats, CliError> {
    params.validate().map_err(CliError::from_sim)?;
    type Partial = (Vec<f64>, Vec<f64>, Vec<f64>, f64, f64);
    let partials: Vec<Partial> = (0..params.n_traj as u64)
        .into_par_iter()
        .map(|i| -> Result<Partial, CliError> {
            let rec = match model {
                Model::Quantum => run_trajectory(params, i).map_err(CliError::from_sim)?,
                Model::Classical => {
                    run_trajectory_classical_with(params, i, opts.emission_convention)
                        .map_err(CliError::from_sim)?
                }
            };
            let start = opts.transient_start;
            let r1 = SymbolSequence::binary(rec.r1[start..].to_vec())
                .map_err(CliError::from_metrics)?;
            let r2 = SymbolSequence::binary(rec.r2[start..].to_vec())
                .map_err(CliError::from_metrics)?;
            let c11 = metrics::autocorrelation(&r1, max_lag).map_err(CliError::from_metrics)?;
            let c22 = metrics::autocorrelation(&r2, max_lag).map_err(CliError::from_metrics)?;
            let c12 =
                metrics::cross_correlation(&r1, &r2, max_lag).map_err(CliError::from_metrics)?;
            let m1 = r1.symbols().iter().map(|&b| b as f64).sum::<f64>() / r1.len() as f64;
            let m2 = r2.symbols().iter().map(|&b| b as f64).sum::<f64>() / r2.len() as f64;
            Ok((c11.values, c22.values, c12.values, m1, m2))
        })
        .collect::<Result<_, _>>()?;

    let lags: Vec<usize> = (0..=max_lag).collect();
    let column_stats = |select: fn(&Partial) -> &Vec<f64>| -> (Vec<f64>, Vec<f64>) {
        let mut means = vec![0.0; max_lag + 1];
        let mut sems = vec![0.0; max_lag + 1];
        for tau in 0..=max_lag {
            let col: Vec<f64> = partials.iter().map(|p| select(p)[tau]).collect();
            let (m, s) = mean_sem(&col);
            means[tau] = m;
            sems[tau] = s;
        }
        (means, sems)
    };
    let (m11, e11) = column_stats(|p| &p.0);
    let (m22, e22) = column_stats(|p| &p.1);
    let (m12, e12) = column_stats(|p| &p.2);
    let mean_r1 = partials.iter().map(|p| p.3).sum::<f64>() / partials.len() as f64;
    let mean_r2 = partials.iter().map(|p| p.4).sum::<f64>() / partials.len() as f64;

    Ok(CorrelationStats {
        c11: CorrelationSeries { lags: lags.clone(), values: m11 },
        c22: CorrelationSeries { lags: lags.clone(), values: m22 },
        c12: CorrelationSeries { lags, values: m12 },
        c11_err: e11,
        c22_err: e22,
        c12_err: e12,
        mean_r1,
        mean_r2,
    })
}

/// Run a single trajectory of either model.
pub fn run_one(
    params: &SimParams,
    model: Model,
    convention: EmissionConvention,
    traj_index: u64,
) -> Result<EmissionRecord, CliError> {
    match model {
        Model::Quantum => run_trajectory(params, traj_index).map_err(CliError::from_sim),
        Model::Classical => run_trajectory_classical_with(params, traj_index, convention)
            .map_err(CliError::from_sim),
    }
}
