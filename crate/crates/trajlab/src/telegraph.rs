//! Classical interacting telegraph-spin model: two binary spins with
//! coupling-biased stochastic flips at rates matched to the quantum engine,
//! on the same discrete clock so the records are directly comparable.

use rand::Rng;
use rayon::prelude::*;

use crate::metrics::{shannon_entropy, MetricsError, OccupancyTable};
use crate::qjump::{trajectory_rng, EmissionRecord, SampledState, SimParams, SimError, StateSample};

/// Flip probabilities above this invalidate the discrete-step approximation.
pub const FLIP_PROB_GUARD: f64 = 0.5;

/// Two classical bits; `1` is the excited/on level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalState {
    pub s1: u8,
    pub s2: u8,
}

impl ClassicalState {
    pub fn new(s1: u8, s2: u8) -> Result<Self, SimError> {
        if s1 > 1 || s2 > 1 {
            return Err(SimError::InvalidParam {
                field: "state",
                msg: format!("({s1}, {s2}) is not a bit pair"),
            });
        }
        Ok(Self { s1, s2 })
    }
}

/// What counts as an emission in the classical record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmissionConvention {
    /// Any flip (0 -> 1 or 1 -> 0) records a 1. This is the convention that
    /// keeps the rate calibration against the quantum channel intact.
    #[default]
    AnyFlip,
    /// Only decay-like 1 -> 0 flips record a 1.
    DownFlip,
}

impl EmissionConvention {
    pub fn label(&self) -> &'static str {
        match self {
            EmissionConvention::AnyFlip => "any-flip",
            EmissionConvention::DownFlip => "down-flip",
        }
    }
}

/// Effective classical drive `gamma Omega^2 / (gamma^2 + 2(Omega^2 + J^2))`,
/// the rate matching that gives both models the same steady-state emission
/// rate at the reference decay rate. The all-zero corner resolves to 0.
pub fn effective_drive(p: &SimParams) -> f64 {
    let denom = p.gamma * p.gamma + 2.0 * (p.omega * p.omega + p.coupling * p.coupling);
    if denom == 0.0 {
        return 0.0;
    }
    p.gamma * p.omega * p.omega / denom
}

/// Per-step flip probability
/// `dt * gamma * Omega_eff * exp(-beta J (2 s_i - 1)(2 s_j - 1))`.
pub fn flip_probability(s_i: u8, s_j: u8, p: &SimParams) -> Result<f64, SimError> {
    let alignment = (2.0 * s_i as f64 - 1.0) * (2.0 * s_j as f64 - 1.0);
    let prob =
        p.dt * p.gamma * effective_drive(p) * (-p.beta * p.coupling * alignment).exp();
    if prob > FLIP_PROB_GUARD {
        return Err(SimError::StepGuard(format!(
            "flip probability {prob} exceeds {FLIP_PROB_GUARD}; reduce dt"
        )));
    }
    Ok(prob)
}

/// One simultaneous-update step: both flip probabilities are evaluated on
/// the pre-step configuration, then independent uniform draws decide each
/// flip. Returned bits are 1 iff the corresponding spin flipped.
pub fn tg_step(
    state: ClassicalState,
    p: &SimParams,
    rng: &mut impl Rng,
) -> Result<(ClassicalState, u8, u8), SimError> {
    let u1 = rng.random::<f64>();
    let u2 = rng.random::<f64>();
    tg_step_with_uniforms(state, p, u1, u2)
}

/// Deterministic variant of [`tg_step`] with both uniforms supplied.
pub fn tg_step_with_uniforms(
    state: ClassicalState,
    p: &SimParams,
    u1: f64,
    u2: f64,
) -> Result<(ClassicalState, u8, u8), SimError> {
    let p1 = flip_probability(state.s1, state.s2, p)?;
    let p2 = flip_probability(state.s2, state.s1, p)?;
    let f1 = u8::from(u1 < p1);
    let f2 = u8::from(u2 < p2);
    let next = ClassicalState { s1: state.s1 ^ f1, s2: state.s2 ^ f2 };
    Ok((next, f1, f2))
}

/// Run one classical trajectory from `(0, 0)` with the default any-flip
/// emission convention.
pub fn run_trajectory_classical(
    p: &SimParams,
    traj_index: u64,
) -> Result<EmissionRecord, SimError> {
    run_trajectory_classical_with(p, traj_index, EmissionConvention::AnyFlip)
}

/// Run one classical trajectory, recording emissions per `convention` and
/// the spin pair every `sample_stride` steps. Deterministic per
/// `(seed, traj_index)` through the same stream splitting as the quantum
/// engine.
pub fn run_trajectory_classical_with(
    p: &SimParams,
    traj_index: u64,
    convention: EmissionConvention,
) -> Result<EmissionRecord, SimError> {
    p.validate()?;
    // Surface an oversized flip probability before the loop.
    flip_probability(0, 1, p)?;
    flip_probability(1, 0, p)?;

    let mut rng = trajectory_rng(p.seed, traj_index);
    let mut state = ClassicalState { s1: 0, s2: 0 };
    let mut r1 = Vec::with_capacity(p.steps);
    let mut r2 = Vec::with_capacity(p.steps);
    let mut samples = Vec::with_capacity(p.steps / p.sample_stride + 1);
    for t in 0..p.steps {
        let before = state;
        let (next, f1, f2) = tg_step(state, p, &mut rng)?;
        state = next;
        let (e1, e2) = match convention {
            EmissionConvention::AnyFlip => (f1, f2),
            EmissionConvention::DownFlip => (f1 & before.s1, f2 & before.s2),
        };
        r1.push(e1);
        r2.push(e2);
        if (t + 1) % p.sample_stride == 0 {
            samples.push(StateSample {
                step: t + 1,
                state: SampledState::Classical { s1: state.s1, s2: state.s2 },
            });
        }
    }
    Ok(EmissionRecord { r1, r2, dt: p.dt, params: *p, state_samples: samples })
}

/// All classical trajectories of the ensemble, in trajectory-index order.
pub fn run_ensemble_classical(
    p: &SimParams,
    convention: EmissionConvention,
) -> Result<Vec<EmissionRecord>, SimError> {
    p.validate()?;
    (0..p.n_traj as u64)
        .into_par_iter()
        .map(|i| run_trajectory_classical_with(p, i, convention))
        .collect()
}

/// `I_cl = H(s1) + H(s2) - H(s1, s2)` in nats from a joint occupancy table.
pub fn classical_mutual_information(occ: &OccupancyTable) -> Result<f64, MetricsError> {
    let (m1, m2) = occ.marginals();
    let h1 = shannon_entropy(&m1)?;
    let h2 = shannon_entropy(&m2)?;
    let h12 = shannon_entropy(&occ.flat())?;
    Ok(h1 + h2 - h12)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(omega: f64, gamma: f64, coupling: f64) -> SimParams {
        SimParams { omega, gamma, coupling, ..Default::default() }
    }

    #[test]
    fn effective_drive_reference_points() {
        assert!((effective_drive(&params(1.0, 1.0, 0.0)) - 1.0 / 3.0).abs() < 1e-15);
        assert!((effective_drive(&params(1.0, 1.0, 1.0)) - 0.2).abs() < 1e-15);
        assert_eq!(effective_drive(&params(0.0, 1.0, 0.0)), 0.0);
        // The 0/0 corner is defined as 0.
        assert_eq!(effective_drive(&params(0.0, 0.0, 0.0)), 0.0);
    }

    #[test]
    fn flip_probability_bias() {
        let p = params(1.0, 1.0, 0.0);
        let base = p.dt * p.gamma * effective_drive(&p);
        for (si, sj) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert!((flip_probability(si, sj, &p).unwrap() - base).abs() < 1e-18);
        }

        // beta J = 1: aligned slows by e^-1, anti-aligned speeds by e^+1.
        let p = params(1.0, 1.0, 1.0);
        let base = p.dt * p.gamma * effective_drive(&p);
        let aligned = flip_probability(1, 1, &p).unwrap();
        let anti = flip_probability(1, 0, &p).unwrap();
        assert!((aligned - base * (-1f64).exp()).abs() < 1e-18);
        assert!((anti - base * 1f64.exp()).abs() < 1e-18);
    }

    #[test]
    fn detailed_balance_ratio_is_exact() {
        for coupling in [0.3, 1.0, 2.5] {
            for beta in [0.5, 1.0] {
                let p = SimParams { beta, ..params(1.0, 1.0, coupling) };
                let anti = flip_probability(1, 0, &p).unwrap();
                let aligned = flip_probability(1, 1, &p).unwrap();
                let ratio = anti / aligned;
                let expect = (2.0 * beta * coupling).exp();
                assert!(
                    ((ratio - expect) / expect).abs() < 1e-14,
                    "ratio {ratio} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn flip_probability_guard() {
        // Push the probability over 0.5 with a large drive at beta J < 0.
        let p = SimParams {
            beta: -8.0,
            ..params(1.0, 1.0, 1.0)
        };
        assert!(matches!(
            flip_probability(1, 1, &p),
            Err(SimError::StepGuard(_))
        ));
    }

    #[test]
    fn tg_step_forced_draws() {
        let p = params(1.0, 1.0, 0.0);
        let s = ClassicalState { s1: 1, s2: 0 };
        // Draws at or above the flip probability leave the state unchanged.
        let (next, e1, e2) = tg_step_with_uniforms(s, &p, 0.9, 0.9).unwrap();
        assert_eq!(next, s);
        assert_eq!((e1, e2), (0, 0));

        // Draws below it flip both simultaneously.
        let (next, e1, e2) = tg_step_with_uniforms(s, &p, 0.0, 0.0).unwrap();
        assert_eq!(next, ClassicalState { s1: 0, s2: 1 });
        assert_eq!((e1, e2), (1, 1));

        // omega = 0 never flips for any draw.
        let p0 = params(0.0, 1.0, 0.0);
        let (next, e1, e2) = tg_step_with_uniforms(s, &p0, 0.0, 0.0).unwrap();
        assert_eq!(next, s);
        assert_eq!((e1, e2), (0, 0));
    }

    #[test]
    fn empirical_flip_rate_matches_at_zero_coupling() {
        // J = 0: per-spin flip rate is gamma * Omega_eff; compare counted
        // flips to the binomial expectation within 3 sigma.
        let p = SimParams { steps: 100_000, ..params(1.0, 1.0, 0.0) };
        let rec = run_trajectory_classical(&p, 3).unwrap();
        let q = p.dt * p.gamma * effective_drive(&p);
        let expect = q * p.steps as f64;
        let sigma = (p.steps as f64 * q * (1.0 - q)).sqrt();
        for (label, r) in [("r1", &rec.r1), ("r2", &rec.r2)] {
            let count = r.iter().map(|&b| b as u64).sum::<u64>() as f64;
            assert!(
                (count - expect).abs() <= 3.0 * sigma,
                "{label}: {count} vs {expect} +- {sigma}"
            );
        }
        // Mean emissions per step per channel ~ dt/3 at these parameters.
        let mean = rec.r1.iter().map(|&b| b as f64).sum::<f64>() / p.steps as f64;
        assert!((mean - p.dt / 3.0).abs() <= 3.0 * sigma / p.steps as f64);
    }

    #[test]
    fn classical_trajectory_determinism_and_freezing() {
        let p = SimParams { steps: 5000, ..params(1.0, 1.0, 0.5) };
        let a = run_trajectory_classical(&p, 11).unwrap();
        let b = run_trajectory_classical(&p, 11).unwrap();
        assert_eq!(a.r1, b.r1);
        assert_eq!(a.r2, b.r2);

        let p0 = SimParams { steps: 5000, ..params(0.0, 1.0, 0.0) };
        let rec = run_trajectory_classical(&p0, 0).unwrap();
        assert!(rec.r1.iter().all(|&x| x == 0));
        assert!(rec.state_samples.iter().all(|s| matches!(
            s.state,
            SampledState::Classical { s1: 0, s2: 0 }
        )));
    }

    #[test]
    fn down_flip_convention_records_fewer_events() {
        let p = SimParams { steps: 50_000, ..params(1.0, 1.0, 0.0) };
        let any = run_trajectory_classical_with(&p, 2, EmissionConvention::AnyFlip).unwrap();
        let down = run_trajectory_classical_with(&p, 2, EmissionConvention::DownFlip).unwrap();
        let count = |r: &[u8]| r.iter().map(|&b| b as u64).sum::<u64>();
        // Same flips, so down-flip events are a strict subset.
        assert!(count(&down.r1) < count(&any.r1));
        for t in 0..p.steps {
            assert!(down.r1[t] <= any.r1[t]);
        }
    }

    #[test]
    fn classical_mi_reference_tables() {
        let uniform = OccupancyTable::from_probabilities([[0.25, 0.25], [0.25, 0.25]]).unwrap();
        assert!(classical_mutual_information(&uniform).unwrap().abs() < 1e-15);

        let correlated = OccupancyTable::from_probabilities([[0.5, 0.0], [0.0, 0.5]]).unwrap();
        assert!(
            (classical_mutual_information(&correlated).unwrap() - 2f64.ln()).abs() < 1e-15
        );

        // Hand-evaluated Shannon oracle:
        // H1 = H2 = ln 2, H12 = -(0.8 ln 0.4 + 0.2 ln 0.1),
        // I = 2 ln 2 + 0.8 ln 0.4 + 0.2 ln 0.1 = 0.19274475...
        let table = OccupancyTable::from_probabilities([[0.4, 0.1], [0.1, 0.4]]).unwrap();
        let expect = 2.0 * 2f64.ln() + 0.8 * 0.4f64.ln() + 0.2 * 0.1f64.ln();
        assert!((expect - 0.1927447570).abs() < 1e-9);
        assert!((classical_mutual_information(&table).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn classical_mi_bounded_by_marginal_entropies() {
        use rand::Rng;
        let mut rng = crate::qjump::trajectory_rng(17, 0);
        for _ in 0..200 {
            let mut p = [[0.0; 2]; 2];
            let mut sum = 0.0;
            for row in &mut p {
                for v in row.iter_mut() {
                    *v = rng.random::<f64>();
                    sum += *v;
                }
            }
            for row in &mut p {
                for v in row.iter_mut() {
                    *v /= sum;
                }
            }
            let occ = OccupancyTable::from_probabilities(p).unwrap();
            let mi = classical_mutual_information(&occ).unwrap();
            let (m1, m2) = occ.marginals();
            let h1 = shannon_entropy(&m1).unwrap();
            let h2 = shannon_entropy(&m2).unwrap();
            assert!(mi >= -1e-12);
            assert!(mi <= h1.min(h2) + 1e-9);
        }
    }
}
