//! Sequence and statistical analysis for emission records: Lempel-Ziv
//! complexity, lagged correlations, occupancy tables, Shannon entropy,
//! Spearman rank correlation, and the Welch t-test.

use thiserror::Error;

mod lz;
mod stats;

pub use lz::{lz_complexity, normalized_lz};
pub use stats::{spearman, student_t_two_sided_p, welch_t_test};

use crate::qjump::EmissionRecord;

/// Probability-table normalization tolerance.
pub const PROB_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("empty sequence")]
    EmptySequence,
    #[error("sequence too short: length {n} < {min}")]
    TooShort { n: usize, min: usize },
    #[error("alphabet size {0} out of range (need 2..=16)")]
    BadAlphabet(usize),
    #[error("symbol {symbol} at position {pos} outside alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: u8, pos: usize, alphabet: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("max_lag {max_lag} must be below sequence length {n}")]
    LagTooLarge { max_lag: usize, n: usize },
    #[error("lag grids differ")]
    LagGridMismatch,
    #[error("invalid probability table: {0}")]
    BadDistribution(String),
    #[error("correlation undefined: {0}")]
    DegenerateCorrelation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Finite-alphabet symbol sequence; every symbol lies in `[0, alphabet)`.
#[derive(Debug, Clone)]
pub struct SymbolSequence {
    symbols: Vec<u8>,
    alphabet: usize,
}

impl SymbolSequence {
    pub fn new(symbols: Vec<u8>, alphabet: usize) -> Result<Self, MetricsError> {
        if !(2..=16).contains(&alphabet) {
            return Err(MetricsError::BadAlphabet(alphabet));
        }
        for (pos, &s) in symbols.iter().enumerate() {
            if s as usize >= alphabet {
                return Err(MetricsError::SymbolOutOfRange { symbol: s, pos, alphabet });
            }
        }
        Ok(Self { symbols, alphabet })
    }

    pub fn binary(bits: Vec<u8>) -> Result<Self, MetricsError> {
        Self::new(bits, 2)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }
}

/// Per-step joint encoding of two binary records: `symbol = 2 r1 + r2`.
pub fn joint_encode(
    r1: &SymbolSequence,
    r2: &SymbolSequence,
) -> Result<SymbolSequence, MetricsError> {
    if r1.alphabet() != 2 || r2.alphabet() != 2 {
        return Err(MetricsError::BadAlphabet(r1.alphabet().max(r2.alphabet())));
    }
    if r1.len() != r2.len() {
        return Err(MetricsError::LengthMismatch(r1.len(), r2.len()));
    }
    let symbols = r1
        .symbols()
        .iter()
        .zip(r2.symbols())
        .map(|(&a, &b)| 2 * a + b)
        .collect();
    SymbolSequence::new(symbols, 4)
}

/// Lag-indexed correlation values; lags are step counts starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSeries {
    pub lags: Vec<usize>,
    pub values: Vec<f64>,
}

/// Raw lagged self-product `C[tau] = <r(t) r(t+tau)>_t` with the unbiased
/// `1/(n - tau)` overlapping-window average.
pub fn autocorrelation(
    r: &SymbolSequence,
    max_lag: usize,
) -> Result<CorrelationSeries, MetricsError> {
    lagged_product(r, r, max_lag)
}

/// `C12[tau] = <r1(t) r2(t+tau)>_t`; the second record is the one advanced
/// by the lag.
pub fn cross_correlation(
    r1: &SymbolSequence,
    r2: &SymbolSequence,
    max_lag: usize,
) -> Result<CorrelationSeries, MetricsError> {
    if r1.len() != r2.len() {
        return Err(MetricsError::LengthMismatch(r1.len(), r2.len()));
    }
    lagged_product(r1, r2, max_lag)
}

fn lagged_product(
    a: &SymbolSequence,
    b: &SymbolSequence,
    max_lag: usize,
) -> Result<CorrelationSeries, MetricsError> {
    let n = a.len();
    if n == 0 {
        return Err(MetricsError::EmptySequence);
    }
    if max_lag >= n {
        return Err(MetricsError::LagTooLarge { max_lag, n });
    }
    let xs = a.symbols();
    let ys = b.symbols();
    let mut lags = Vec::with_capacity(max_lag + 1);
    let mut values = Vec::with_capacity(max_lag + 1);
    for tau in 0..=max_lag {
        let mut acc: u64 = 0;
        for t in 0..(n - tau) {
            acc += xs[t] as u64 * ys[t + tau] as u64;
        }
        lags.push(tau);
        values.push(acc as f64 / (n - tau) as f64);
    }
    Ok(CorrelationSeries { lags, values })
}

/// Elementwise difference of two correlation series on the same lag grid.
pub fn delta_correlation(
    c_j: &CorrelationSeries,
    c_0: &CorrelationSeries,
) -> Result<CorrelationSeries, MetricsError> {
    if c_j.lags != c_0.lags {
        return Err(MetricsError::LagGridMismatch);
    }
    let values = c_j
        .values
        .iter()
        .zip(&c_0.values)
        .map(|(a, b)| a - b)
        .collect();
    Ok(CorrelationSeries { lags: c_j.lags.clone(), values })
}

/// Joint probability table over the four `(s1, s2)` spin configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyTable {
    p: [[f64; 2]; 2],
}

impl OccupancyTable {
    /// Empirical frequencies from `(s1, s2)` samples.
    pub fn from_samples(samples: &[(u8, u8)]) -> Result<Self, MetricsError> {
        if samples.is_empty() {
            return Err(MetricsError::InvalidArgument("empty sample list".into()));
        }
        let mut counts = [[0u64; 2]; 2];
        for &(s1, s2) in samples {
            if s1 > 1 || s2 > 1 {
                return Err(MetricsError::InvalidArgument(format!(
                    "sample ({s1}, {s2}) is not a bit pair"
                )));
            }
            counts[s1 as usize][s2 as usize] += 1;
        }
        let total = samples.len() as f64;
        let mut p = [[0.0; 2]; 2];
        for s1 in 0..2 {
            for s2 in 0..2 {
                p[s1][s2] = counts[s1][s2] as f64 / total;
            }
        }
        Ok(Self { p })
    }

    pub fn from_probabilities(p: [[f64; 2]; 2]) -> Result<Self, MetricsError> {
        let mut sum = 0.0;
        for row in &p {
            for &v in row {
                if !v.is_finite() || v < 0.0 {
                    return Err(MetricsError::BadDistribution(format!("entry {v}")));
                }
                sum += v;
            }
        }
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(MetricsError::BadDistribution(format!("sum = {sum}")));
        }
        Ok(Self { p })
    }

    pub fn get(&self, s1: u8, s2: u8) -> f64 {
        self.p[s1 as usize][s2 as usize]
    }

    /// `(P(s1 = 0..2), P(s2 = 0..2))`.
    pub fn marginals(&self) -> ([f64; 2], [f64; 2]) {
        let m1 = [self.p[0][0] + self.p[0][1], self.p[1][0] + self.p[1][1]];
        let m2 = [self.p[0][0] + self.p[1][0], self.p[0][1] + self.p[1][1]];
        (m1, m2)
    }

    /// Flattened `(p00, p01, p10, p11)`.
    pub fn flat(&self) -> [f64; 4] {
        [self.p[0][0], self.p[0][1], self.p[1][0], self.p[1][1]]
    }
}

/// Empirical occupancy over classical bit-pair samples.
pub fn occupancy_table(samples: &[(u8, u8)]) -> Result<OccupancyTable, MetricsError> {
    OccupancyTable::from_samples(samples)
}

/// `-sum p ln p` in nats with `0 ln 0 = 0`.
pub fn shannon_entropy(dist: &[f64]) -> Result<f64, MetricsError> {
    let mut sum = 0.0;
    for &p in dist {
        if !p.is_finite() || p < 0.0 {
            return Err(MetricsError::BadDistribution(format!("entry {p}")));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > PROB_SUM_TOL {
        return Err(MetricsError::BadDistribution(format!("sum = {sum}")));
    }
    Ok(dist.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum())
}

/// Running per-channel emission counts of a record.
pub fn cumulative_counts(rec: &EmissionRecord) -> (Vec<u64>, Vec<u64>) {
    (running_sum(&rec.r1), running_sum(&rec.r2))
}

fn running_sum(bits: &[u8]) -> Vec<u64> {
    let mut acc = 0u64;
    bits.iter()
        .map(|&b| {
            acc += b as u64;
            acc
        })
        .collect()
}

/// One row of a sweep output table.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub model: Model,
    pub omega: f64,
    pub gamma: f64,
    pub coupling: f64,
    pub lz: f64,
    pub lz_err: f64,
    pub mi: f64,
    pub mi_err: f64,
    pub n_traj: usize,
}

/// Which simulator produced a record or row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Model {
    Quantum,
    Classical,
}

impl Model {
    pub fn label(&self) -> &'static str {
        match self {
            Model::Quantum => "quantum",
            Model::Classical => "classical",
        }
    }
}
