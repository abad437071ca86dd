//! Quantum-jump Monte Carlo engine for the driven-dissipative two-qubit
//! system: drift and propagator construction, the per-step stochastic
//! update, trajectory and ensemble runners, and quantum mutual information.
//!
//! Each trajectory owns a counter-based RNG stream derived from the master
//! seed and the trajectory index, so ensembles are reproducible bit for bit
//! under any parallel schedule.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::matkit::{
    self, basis_index, kron, mat_exp, partial_trace, von_neumann_entropy, CMatrix, CVector,
    MatError, Subsystem,
};
use crate::metrics::OccupancyTable;

/// First-order jump probabilities need `gamma * dt` well below 1.
pub const GAMMA_DT_GUARD: f64 = 0.05;
/// Norm tolerance for state inputs.
pub const NORM_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid parameter {field}: {msg}")]
    InvalidParam { field: &'static str, msg: String },
    #[error("numerical guard: {0}")]
    StepGuard(String),
    #[error("state norm {norm} outside tolerance")]
    NotNormalized { norm: f64 },
    #[error("empty sampling window {start}..{end}")]
    EmptyWindow { start: usize, end: usize },
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Physical and numerical parameters shared by both simulators.
///
/// Rates are in units of the decay rate at `gamma = 1`; `dt` is the step in
/// units of `1/gamma` at that reference point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    /// Rabi drive amplitude.
    pub omega: f64,
    /// Per-qubit decay rate.
    pub gamma: f64,
    /// Ising coupling strength.
    pub coupling: f64,
    /// Bias scale factor in the classical flip exponent.
    pub beta: f64,
    /// Time step.
    pub dt: f64,
    /// Steps per trajectory.
    pub steps: usize,
    /// Ensemble size.
    pub n_traj: usize,
    /// Master seed; trajectory `i` uses stream `i` of this seed.
    pub seed: u64,
    /// State-sampling period in steps.
    pub sample_stride: usize,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            omega: 1.0,
            gamma: 1.0,
            coupling: 0.0,
            beta: 1.0,
            dt: 0.01,
            steps: 100_000,
            n_traj: 200,
            seed: 1,
            sample_stride: 10,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<(), SimError> {
        let checks: [(&'static str, bool, String); 8] = [
            ("omega", self.omega >= 0.0 && self.omega.is_finite(), format!("{} must be >= 0", self.omega)),
            ("gamma", self.gamma >= 0.0 && self.gamma.is_finite(), format!("{} must be >= 0", self.gamma)),
            ("coupling", self.coupling.is_finite(), format!("{} must be finite", self.coupling)),
            ("beta", self.beta.is_finite(), format!("{} must be finite", self.beta)),
            ("dt", self.dt > 0.0 && self.dt.is_finite(), format!("{} must be > 0", self.dt)),
            ("steps", self.steps >= 1, format!("{} must be >= 1", self.steps)),
            ("n_traj", self.n_traj >= 1, format!("{} must be >= 1", self.n_traj)),
            ("sample_stride", self.sample_stride >= 1, format!("{} must be >= 1", self.sample_stride)),
        ];
        for (field, ok, msg) in checks {
            if !ok {
                return Err(SimError::InvalidParam { field, msg });
            }
        }
        if self.gamma * self.dt > GAMMA_DT_GUARD {
            return Err(SimError::StepGuard(format!(
                "gamma*dt = {} exceeds {GAMMA_DT_GUARD}; reduce dt",
                self.gamma * self.dt
            )));
        }
        Ok(())
    }
}

/// State sampled along a trajectory at a given step (1-based step index of
/// the state after that step).
#[derive(Debug, Clone)]
pub struct StateSample {
    pub step: usize,
    pub state: SampledState,
}

#[derive(Debug, Clone)]
pub enum SampledState {
    Quantum([C64; 4]),
    Classical { s1: u8, s2: u8 },
}

/// Per-channel binary emission series of one trajectory, with sampled
/// system states and the parameter snapshot that produced it.
#[derive(Debug, Clone)]
pub struct EmissionRecord {
    pub r1: Vec<u8>,
    pub r2: Vec<u8>,
    pub dt: f64,
    pub params: SimParams,
    pub state_samples: Vec<StateSample>,
}

/// RNG stream for one trajectory: ChaCha8 keyed by the master seed with the
/// trajectory index as the stream number.
pub fn trajectory_rng(seed: u64, traj_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(traj_index);
    rng
}

/// `H = (omega/2)(sx x I + I x sx) + J sz x sz`.
pub fn build_hamiltonian(p: &SimParams) -> CMatrix {
    let sx = matkit::sigma_x();
    let sz = matkit::sigma_z();
    let i2 = CMatrix::identity(2);
    let drive = kron(&sx, &i2)
        .unwrap()
        .add(&kron(&i2, &sx).unwrap())
        .scale(C64::new(p.omega / 2.0, 0.0));
    let ising = kron(&sz, &sz).unwrap().scale(C64::new(p.coupling, 0.0));
    drive.add(&ising)
}

/// Non-Hermitian drift generator `H - (i gamma / 2)(n1 + n2)`.
pub fn build_effective_hamiltonian(p: &SimParams) -> CMatrix {
    let n = matkit::number_op();
    let i2 = CMatrix::identity(2);
    let n_total = kron(&n, &i2).unwrap().add(&kron(&i2, &n).unwrap());
    build_hamiltonian(p).add(&n_total.scale(C64::new(0.0, -p.gamma / 2.0)))
}

/// Short-time no-jump propagator `exp(-i H_eff dt)`.
pub fn build_propagator(p: &SimParams) -> Result<CMatrix, SimError> {
    Ok(mat_exp(&build_effective_hamiltonian(p), C64::new(0.0, -p.dt))?)
}

/// Per-channel jump probabilities `p_i = gamma dt <n_i>` for a normalized
/// state.
pub fn jump_probabilities(psi: &CVector, p: &SimParams) -> Result<(f64, f64), SimError> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(SimError::NotNormalized { norm });
    }
    let a = psi.entries();
    let n1 = a[0].norm_sqr() + a[1].norm_sqr();
    let n2 = a[0].norm_sqr() + a[2].norm_sqr();
    Ok((p.gamma * p.dt * n1, p.gamma * p.dt * n2))
}

#[inline]
fn normalize4(state: &mut [C64; 4]) {
    let norm = state.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
    assert!(norm > 0.0, "jump applied to a zero-norm branch");
    for e in state.iter_mut() {
        *e /= norm;
    }
}

/// One stochastic step on a raw amplitude array with a supplied uniform
/// draw. The single draw is partitioned into `[0, p1)`, `[p1, p1+p2)` and
/// the no-jump remainder, so at most one channel fires per step.
#[inline]
fn step_amps(state: &mut [C64; 4], u_eff: &[[C64; 4]; 4], gamma_dt: f64, u: f64) -> (u8, u8) {
    let n1 = state[0].norm_sqr() + state[1].norm_sqr();
    let n2 = state[0].norm_sqr() + state[2].norm_sqr();
    let p1 = gamma_dt * n1;
    let p2 = gamma_dt * n2;
    if u < p1 {
        // sigma_minus on qubit 1: ee -> ge, eg -> gg.
        *state = [C64::ZERO, C64::ZERO, state[0], state[1]];
        normalize4(state);
        (1, 0)
    } else if u < p1 + p2 {
        // sigma_minus on qubit 2: ee -> eg, ge -> gg.
        *state = [C64::ZERO, state[0], C64::ZERO, state[2]];
        normalize4(state);
        (0, 1)
    } else {
        let mut next = [C64::ZERO; 4];
        for (i, row) in u_eff.iter().enumerate() {
            let mut acc = C64::ZERO;
            for (j, m) in row.iter().enumerate() {
                acc += m * state[j];
            }
            next[i] = acc;
        }
        *state = next;
        normalize4(state);
        (0, 0)
    }
}

fn to_rows(m: &CMatrix) -> [[C64; 4]; 4] {
    let mut rows = [[C64::ZERO; 4]; 4];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = m.get(i, j);
        }
    }
    rows
}

/// One stochastic update drawing its uniform from `rng`.
pub fn qj_step(
    psi: &CVector,
    u_eff: &CMatrix,
    p: &SimParams,
    rng: &mut impl Rng,
) -> Result<(CVector, u8, u8), SimError> {
    qj_step_with_uniform(psi, u_eff, p, rng.random::<f64>())
}

/// Deterministic variant of [`qj_step`] with the uniform draw supplied.
pub fn qj_step_with_uniform(
    psi: &CVector,
    u_eff: &CMatrix,
    p: &SimParams,
    u: f64,
) -> Result<(CVector, u8, u8), SimError> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(SimError::NotNormalized { norm });
    }
    let mut amps = [C64::ZERO; 4];
    amps.copy_from_slice(psi.entries());
    let rows = to_rows(u_eff);
    let (e1, e2) = step_amps(&mut amps, &rows, p.gamma * p.dt, u);
    Ok((CVector::new(amps.to_vec()), e1, e2))
}

/// Run one trajectory from `|gg>`, recording emissions each step and the
/// state every `sample_stride` steps.
pub fn run_trajectory(p: &SimParams, traj_index: u64) -> Result<EmissionRecord, SimError> {
    p.validate()?;
    let u_eff = to_rows(&build_propagator(p)?);
    let mut rng = trajectory_rng(p.seed, traj_index);
    let gamma_dt = p.gamma * p.dt;

    let mut state = [C64::ZERO, C64::ZERO, C64::ZERO, C64::ONE];
    let mut r1 = Vec::with_capacity(p.steps);
    let mut r2 = Vec::with_capacity(p.steps);
    let mut samples = Vec::with_capacity(p.steps / p.sample_stride + 1);
    for t in 0..p.steps {
        let u = rng.random::<f64>();
        let (e1, e2) = step_amps(&mut state, &u_eff, gamma_dt, u);
        r1.push(e1);
        r2.push(e2);
        if (t + 1) % p.sample_stride == 0 {
            samples.push(StateSample { step: t + 1, state: SampledState::Quantum(state) });
        }
    }
    Ok(EmissionRecord { r1, r2, dt: p.dt, params: *p, state_samples: samples })
}

/// All trajectories of the ensemble, in trajectory-index order.
pub fn run_ensemble(p: &SimParams) -> Result<Vec<EmissionRecord>, SimError> {
    p.validate()?;
    (0..p.n_traj as u64)
        .into_par_iter()
        .map(|i| run_trajectory(p, i))
        .collect()
}

/// Mean projector over a set of sampled amplitudes.
pub fn density_matrix_from_samples<'a, I>(samples: I) -> Result<CMatrix, SimError>
where
    I: IntoIterator<Item = &'a [C64; 4]>,
{
    let mut sum = CMatrix::zeros(4);
    let mut count = 0usize;
    for amps in samples {
        sum.accumulate_outer(amps);
        count += 1;
    }
    if count == 0 {
        return Err(SimError::EmptyWindow { start: 0, end: 0 });
    }
    Ok(sum.scale(C64::new(1.0 / count as f64, 0.0)))
}

/// Ensemble- and time-averaged density matrix over the sampled states with
/// step index in `(window.0, window.1]`.
pub fn ensemble_density_matrix(
    p: &SimParams,
    window: (usize, usize),
) -> Result<CMatrix, SimError> {
    p.validate()?;
    let (start, end) = window;
    if start >= end || end > p.steps {
        return Err(SimError::EmptyWindow { start, end });
    }
    let partials: Vec<(CMatrix, usize)> = (0..p.n_traj as u64)
        .into_par_iter()
        .map(|i| -> Result<(CMatrix, usize), SimError> {
            let rec = run_trajectory(p, i)?;
            let mut sum = CMatrix::zeros(4);
            let mut count = 0usize;
            for s in &rec.state_samples {
                if s.step > start && s.step <= end {
                    if let SampledState::Quantum(amps) = s.state {
                        sum.accumulate_outer(&amps);
                        count += 1;
                    }
                }
            }
            Ok((sum, count))
        })
        .collect::<Result<_, _>>()?;
    // Deterministic reduction in trajectory order.
    let mut total = CMatrix::zeros(4);
    let mut count = 0usize;
    for (sum, c) in partials {
        total = total.add(&sum);
        count += c;
    }
    if count == 0 {
        return Err(SimError::EmptyWindow { start, end });
    }
    Ok(total.scale(C64::new(1.0 / count as f64, 0.0)))
}

/// `I_AB = S(rho_A) + S(rho_B) - S(rho_AB)` in nats.
pub fn quantum_mutual_information(rho_ab: &CMatrix) -> Result<f64, SimError> {
    let s_a = von_neumann_entropy(&partial_trace(rho_ab, Subsystem::A)?)?;
    let s_b = von_neumann_entropy(&partial_trace(rho_ab, Subsystem::B)?)?;
    let s_ab = von_neumann_entropy(rho_ab)?;
    Ok(s_a + s_b - s_ab)
}

/// Mutual information of a pure state, `2 S(rho_A)`; the per-trajectory
/// reading of the information measure.
pub fn pure_state_mutual_information(amps: &[C64; 4]) -> Result<f64, SimError> {
    let psi = CVector::new(amps.to_vec());
    let rho_a = partial_trace(&psi.projector(), Subsystem::A)?;
    Ok(2.0 * von_neumann_entropy(&rho_a)?)
}

/// Computational-basis occupancy `P(s1, s2)` from the density-matrix
/// diagonal. Tiny negative diagonal noise is clamped to zero before
/// renormalizing.
pub fn occupancy_from_density(rho: &CMatrix) -> Result<OccupancyTable, SimError> {
    let mut p = [[0.0f64; 2]; 2];
    let mut sum = 0.0;
    for s1 in 0..2u8 {
        for s2 in 0..2u8 {
            let v = rho.get(basis_index(s1, s2), basis_index(s1, s2)).re.max(0.0);
            p[s1 as usize][s2 as usize] = v;
            sum += v;
        }
    }
    if sum <= 0.0 {
        return Err(SimError::InvalidParam {
            field: "rho",
            msg: "diagonal sums to zero".into(),
        });
    }
    for row in &mut p {
        for v in row.iter_mut() {
            *v /= sum;
        }
    }
    OccupancyTable::from_probabilities(p).map_err(|e| SimError::InvalidParam {
        field: "rho",
        msg: e.to_string(),
    })
}
