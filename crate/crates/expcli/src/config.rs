//! Experiment configuration: documented defaults, optional JSON config
//! file, and flag overrides, merged in that order.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use trajlab::qjump::SimParams;
use trajlab::telegraph::EmissionConvention;

use crate::CliError;

/// Which simulator(s) a pipeline drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    Quantum,
    Classical,
    #[default]
    Both,
}

impl ModelChoice {
    pub fn label(&self) -> &'static str {
        match self {
            ModelChoice::Quantum => "quantum",
            ModelChoice::Classical => "classical",
            ModelChoice::Both => "both",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "quantum" => Ok(ModelChoice::Quantum),
            "classical" => Ok(ModelChoice::Classical),
            "both" => Ok(ModelChoice::Both),
            other => Err(CliError::Config(format!(
                "unknown model '{other}' (expected quantum, classical or both)"
            ))),
        }
    }
}

/// How mutual information is estimated from a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MiMode {
    /// From the ensemble- and time-averaged state over the steady window.
    #[default]
    Ensemble,
    /// Per-trajectory values averaged over the ensemble.
    PerTrajectory,
}

impl MiMode {
    pub fn label(&self) -> &'static str {
        match self {
            MiMode::Ensemble => "ensemble",
            MiMode::PerTrajectory => "per-trajectory",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "ensemble" => Ok(MiMode::Ensemble),
            "per-trajectory" => Ok(MiMode::PerTrajectory),
            other => Err(CliError::Config(format!(
                "unknown mi-mode '{other}' (expected ensemble or per-trajectory)"
            ))),
        }
    }
}

pub fn parse_emission_convention(s: &str) -> Result<EmissionConvention, CliError> {
    match s {
        "any-flip" => Ok(EmissionConvention::AnyFlip),
        "down-flip" => Ok(EmissionConvention::DownFlip),
        other => Err(CliError::Config(format!(
            "unknown emission-convention '{other}' (expected any-flip or down-flip)"
        ))),
    }
}

/// Optional sweep grids over coupling and drive-to-decay ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrids {
    pub coupling: Vec<f64>,
    pub ratio: Vec<f64>,
}

impl Default for SweepGrids {
    fn default() -> Self {
        // The coupling grid reaches past J = 3 so the sweep covers the
        // strong-coupling regime where classical trajectories freeze within
        // the analysis window at every default drive ratio. J = 5 is the
        // largest coupling whose classical flip probabilities stay inside
        // the step-size guard at ratio 6.
        Self {
            coupling: vec![0.0, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0],
            ratio: vec![0.25, 1.0, 2.0, 6.0],
        }
    }
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: SimParams,
    pub model: ModelChoice,
    pub sweep: SweepGrids,
    pub transient_fraction: f64,
    pub max_lag: usize,
    pub output_dir: PathBuf,
    pub emission_convention: EmissionConvention,
    pub mi_mode: MiMode,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            params: SimParams::default(),
            model: ModelChoice::Both,
            sweep: SweepGrids::default(),
            transient_fraction: 0.2,
            max_lag: 200,
            output_dir: PathBuf::from("out"),
            emission_convention: EmissionConvention::AnyFlip,
            mi_mode: MiMode::Ensemble,
        }
    }
}

impl ExperimentConfig {
    /// First post-transient step index; metrics run on steps at and after
    /// this, independent of the ensemble size.
    pub fn transient_start(&self) -> usize {
        (self.transient_fraction * self.params.steps as f64).floor() as usize
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.params
            .validate()
            .map_err(CliError::from_sim)?;
        if !(0.0..1.0).contains(&self.transient_fraction) {
            return Err(CliError::Config(format!(
                "transient fraction {} outside [0, 1)",
                self.transient_fraction
            )));
        }
        let window = self.params.steps - self.transient_start();
        if window < 16 {
            return Err(CliError::Config(format!(
                "post-transient window of {window} steps is too short; \
                 increase steps or lower transient"
            )));
        }
        if self.max_lag >= window {
            return Err(CliError::Config(format!(
                "max_lag {} must be below the post-transient window {window}",
                self.max_lag
            )));
        }
        if self.sweep.coupling.is_empty() || self.sweep.ratio.is_empty() {
            return Err(CliError::Config("sweep grids must be non-empty".into()));
        }
        Ok(())
    }
}

/// JSON config file contents; every field optional, unknown keys rejected
/// by name.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub omega: Option<f64>,
    pub gamma: Option<f64>,
    pub coupling: Option<f64>,
    pub beta: Option<f64>,
    pub dt: Option<f64>,
    pub steps: Option<usize>,
    pub n_traj: Option<usize>,
    pub seed: Option<u64>,
    pub sample_stride: Option<usize>,
    pub model: Option<ModelChoice>,
    pub coupling_grid: Option<Vec<f64>>,
    pub ratio_grid: Option<Vec<f64>>,
    pub transient: Option<f64>,
    pub max_lag: Option<usize>,
    pub out: Option<PathBuf>,
    pub emission_convention: Option<String>,
    pub mi_mode: Option<String>,
}

/// Flag-level overrides; applied last.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub omega: Option<f64>,
    pub gamma: Option<f64>,
    pub coupling: Option<f64>,
    pub beta: Option<f64>,
    pub dt: Option<f64>,
    pub steps: Option<usize>,
    pub n_traj: Option<usize>,
    pub seed: Option<u64>,
    pub sample_stride: Option<usize>,
    pub model: Option<ModelChoice>,
    pub transient: Option<f64>,
    pub max_lag: Option<usize>,
    pub out: Option<PathBuf>,
    pub emission_convention: Option<EmissionConvention>,
    pub mi_mode: Option<MiMode>,
}

/// Resolve the configuration: documented defaults, then the config file,
/// then flags.
pub fn parse_config(
    config_path: Option<&Path>,
    overrides: &Overrides,
) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::default();

    if let Some(path) = config_path {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading config {}: {e}", path.display())))?;
        let file: FileConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))?;
        apply_file(&mut cfg, file)?;
    }

    let o = overrides;
    let p = &mut cfg.params;
    merge(&mut p.omega, o.omega);
    merge(&mut p.gamma, o.gamma);
    merge(&mut p.coupling, o.coupling);
    merge(&mut p.beta, o.beta);
    merge(&mut p.dt, o.dt);
    merge(&mut p.steps, o.steps);
    merge(&mut p.n_traj, o.n_traj);
    merge(&mut p.seed, o.seed);
    merge(&mut p.sample_stride, o.sample_stride);
    merge(&mut cfg.model, o.model);
    merge(&mut cfg.transient_fraction, o.transient);
    merge(&mut cfg.max_lag, o.max_lag);
    merge(&mut cfg.output_dir, o.out.clone());
    merge(&mut cfg.emission_convention, o.emission_convention);
    merge(&mut cfg.mi_mode, o.mi_mode);

    cfg.validate()?;
    Ok(cfg)
}

fn apply_file(cfg: &mut ExperimentConfig, file: FileConfig) -> Result<(), CliError> {
    let p = &mut cfg.params;
    merge(&mut p.omega, file.omega);
    merge(&mut p.gamma, file.gamma);
    merge(&mut p.coupling, file.coupling);
    merge(&mut p.beta, file.beta);
    merge(&mut p.dt, file.dt);
    merge(&mut p.steps, file.steps);
    merge(&mut p.n_traj, file.n_traj);
    merge(&mut p.seed, file.seed);
    merge(&mut p.sample_stride, file.sample_stride);
    merge(&mut cfg.model, file.model);
    merge(&mut cfg.transient_fraction, file.transient);
    merge(&mut cfg.max_lag, file.max_lag);
    merge(&mut cfg.output_dir, file.out);
    if let Some(grid) = file.coupling_grid {
        cfg.sweep.coupling = grid;
    }
    if let Some(grid) = file.ratio_grid {
        cfg.sweep.ratio = grid;
    }
    if let Some(s) = file.emission_convention {
        cfg.emission_convention = parse_emission_convention(&s)?;
    }
    if let Some(s) = file.mi_mode {
        cfg.mi_mode = MiMode::parse(&s)?;
    }
    Ok(())
}

fn merge<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl fmt::Display for ExperimentConfig {
    /// Header-block form: one `key = value` line per resolved field.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        writeln!(f, "model = {}", self.model.label())?;
        writeln!(f, "omega = {}", p.omega)?;
        writeln!(f, "gamma = {}", p.gamma)?;
        writeln!(f, "coupling = {}", p.coupling)?;
        writeln!(f, "beta = {}", p.beta)?;
        writeln!(f, "dt = {}", p.dt)?;
        writeln!(f, "steps = {}", p.steps)?;
        writeln!(f, "n_traj = {}", p.n_traj)?;
        writeln!(f, "seed = {}", p.seed)?;
        writeln!(f, "sample_stride = {}", p.sample_stride)?;
        writeln!(f, "transient = {}", self.transient_fraction)?;
        writeln!(f, "max_lag = {}", self.max_lag)?;
        writeln!(f, "emission_convention = {}", self.emission_convention.label())?;
        writeln!(f, "mi_mode = {}", self.mi_mode.label())?;
        writeln!(f, "coupling_grid = {:?}", self.sweep.coupling)?;
        write!(f, "ratio_grid = {:?}", self.sweep.ratio)
    }
}
