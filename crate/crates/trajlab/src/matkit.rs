//! Dense complex linear algebra for the 2x2 and 4x4 matrices the simulators
//! need: Kronecker products, matrix exponentials, Hermitian eigenvalues,
//! partial traces, and von Neumann entropy.
//!
//! Basis convention for two-qubit objects: `|q1 q2>` with qubit 1 the slow
//! index and the excited level first, so the composite ordering is
//! `(ee, eg, ge, gg)`. A bit pair `(s1, s2)` with `s = 1` meaning excited
//! maps to index `2*(1 - s1) + (1 - s2)`; see [`basis_index`].

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Max-norm tolerance for treating a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Tolerance on `Tr rho = 1` for density-matrix inputs.
pub const TRACE_TOL: f64 = 1e-8;
/// Eigenvalues in `[-EIG_CLIP, EIG_CLIP]` are treated as exact zeros before
/// the entropy log; finite-ensemble density matrices carry rounding noise at
/// this scale.
pub const EIG_CLIP: f64 = 1e-12;
/// An eigenvalue below this means the input is not a density matrix.
pub const EIG_NEGATIVE_LIMIT: f64 = -1e-6;

#[derive(Debug, Error)]
pub enum MatError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian (max deviation {dev:.3e})")]
    NotHermitian { dev: f64 },
    #[error("not a density matrix: {0}")]
    NotDensity(String),
}

/// Which qubit a [`partial_trace`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Composite basis index of the computational state `(s1, s2)`,
/// `s = 1` meaning excited: `(1,1) -> 0 (ee)`, `(0,0) -> 3 (gg)`.
pub fn basis_index(s1: u8, s2: u8) -> usize {
    2 * (1 - s1 as usize) + (1 - s2 as usize)
}

/// Square complex matrix of dimension 2 or 4, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![C64::ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C64::ONE);
        }
        m
    }

    pub fn from_entries(dim: usize, entries: Vec<C64>) -> Result<Self, MatError> {
        if entries.len() != dim * dim {
            return Err(MatError::DimMismatch(format!(
                "expected {} entries for dim {}, got {}",
                dim * dim,
                dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: C64) {
        self.entries[row * self.dim + col] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self { dim: self.dim, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self { dim: self.dim, entries }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == C64::ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance from the adjoint, `max |m - m^dag|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.re.is_finite() && e.im.is_finite())
    }

    fn check_finite(&self) -> Result<(), MatError> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let e = self.get(i, j);
                if !(e.re.is_finite() && e.im.is_finite()) {
                    return Err(MatError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        assert_eq!(self.dim, v.dim());
        let n = self.dim;
        let out = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j) * v.entries()[j]).sum())
            .collect();
        CVector::new(out)
    }

    /// `self += |v><v|` for a 4-amplitude state; used by ensemble averaging.
    pub fn accumulate_outer(&mut self, amps: &[C64; 4]) {
        assert_eq!(self.dim, 4);
        for i in 0..4 {
            for j in 0..4 {
                let v = self.get(i, j) + amps[i] * amps[j].conj();
                self.set(i, j, v);
            }
        }
    }
}

/// Complex amplitude vector (dimension 4 for two-qubit states).
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    entries: Vec<C64>,
}

impl CVector {
    pub fn new(entries: Vec<C64>) -> Self {
        Self { entries }
    }

    pub fn basis_state(dim: usize, index: usize) -> Self {
        let mut entries = vec![C64::ZERO; dim];
        entries[index] = C64::ONE;
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize a zero vector");
        Self {
            entries: self.entries.iter().map(|e| e / n).collect(),
        }
    }

    /// Projector `|v><v|`.
    pub fn projector(&self) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.entries[i] * self.entries[j].conj());
            }
        }
        out
    }
}

/// 2x2 Pauli x in the local `(e, g)` ordering.
pub fn sigma_x() -> CMatrix {
    CMatrix::from_entries(2, vec![C64::ZERO, C64::ONE, C64::ONE, C64::ZERO]).unwrap()
}

/// 2x2 Pauli z; `sigma_z |e> = +|e>`.
pub fn sigma_z() -> CMatrix {
    CMatrix::diagonal(&[C64::ONE, -C64::ONE])
}

/// Lowering operator, `sigma_minus |e> = |g>`.
pub fn sigma_minus() -> CMatrix {
    CMatrix::from_entries(2, vec![C64::ZERO, C64::ZERO, C64::ONE, C64::ZERO]).unwrap()
}

/// Raising operator, adjoint of [`sigma_minus`].
pub fn sigma_plus() -> CMatrix {
    sigma_minus().adjoint()
}

/// Excited-state projector `sigma_plus * sigma_minus = diag(1, 0)`.
pub fn number_op() -> CMatrix {
    CMatrix::diagonal(&[C64::ONE, C64::ZERO])
}

/// Kronecker product of two 2x2 matrices in the `|q1 q2>` ordering:
/// `(a kron b)[2i+k][2j+l] = a[i][j] * b[k][l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix, MatError> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(MatError::DimMismatch(format!(
            "kron expects 2x2 factors, got {}x{} and {}x{}",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    let mut out = CMatrix::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.set(2 * i + k, 2 * j + l, a.get(i, j) * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// `exp(scale * m)` by scaling-and-squaring with a truncated Taylor series.
///
/// Accurate to relative error well below 1e-12 for `|scale| * ||m|| <= 1`,
/// which covers the short-time propagators this crate builds.
pub fn mat_exp(m: &CMatrix, scale: C64) -> Result<CMatrix, MatError> {
    m.check_finite()?;
    if !(scale.re.is_finite() && scale.im.is_finite()) {
        return Err(MatError::NonFinite { row: 0, col: 0 });
    }
    let a = m.scale(scale);
    let n = a.dim();

    // Scale down until the max norm is small, run the series, square back.
    let norm = a.max_abs() * n as f64;
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let x = a.scale(C64::new(1.0 / 2f64.powi(squarings as i32), 0.0));

    let mut sum = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=40u32 {
        term = term.matmul(&x).scale(C64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
        if term.max_abs() < 1e-20 * (1.0 + sum.max_abs()) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    Ok(sum)
}

/// All eigenvalues of a Hermitian matrix, ascending, by cyclic complex
/// Jacobi rotations.
pub fn herm_eigvals(m: &CMatrix) -> Result<Vec<f64>, MatError> {
    m.check_finite()?;
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(MatError::NotHermitian { dev });
    }
    let n = m.dim();
    // Work on the exactly Hermitian part (m + m^dag)/2.
    let mut a = m.add(&m.adjoint()).scale(C64::new(0.5, 0.0));

    let scale = a.max_abs().max(1.0);
    for _sweep in 0..60 {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let b = apq.norm();
                if b <= 1e-300 {
                    continue;
                }
                let phase = apq / b;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let theta = (aqq - app) / (2.0 * b);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // Unitary V = diag(1, conj(phase)) * plane rotation on (p, q):
                // V[p][p]=c, V[p][q]=s, V[q][p]=-conj(phase)*s, V[q][q]=conj(phase)*c.
                let cc = C64::new(c, 0.0);
                let sc = C64::new(s, 0.0);
                // Columns: A <- A V.
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * cc - phase.conj() * sc * akq);
                    a.set(k, q, akp * sc + phase.conj() * cc * akq);
                }
                // Rows: A <- V^dag A.
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, cc * apk - phase * sc * aqk);
                    a.set(q, k, sc * apk + phase * cc * aqk);
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}

/// Reduced density matrix of one qubit of a 4x4 two-qubit state.
pub fn partial_trace(rho: &CMatrix, keep: Subsystem) -> Result<CMatrix, MatError> {
    if rho.dim() != 4 {
        return Err(MatError::DimMismatch(format!(
            "partial_trace expects a 4x4 matrix, got {}x{}",
            rho.dim(),
            rho.dim()
        )));
    }
    let mut out = CMatrix::zeros(2);
    match keep {
        Subsystem::A => {
            // rho_A[i][j] = sum_k rho[2i+k][2j+k]
            for i in 0..2 {
                for j in 0..2 {
                    let v = rho.get(2 * i, 2 * j) + rho.get(2 * i + 1, 2 * j + 1);
                    out.set(i, j, v);
                }
            }
        }
        Subsystem::B => {
            // rho_B[i][j] = sum_k rho[2k+i][2k+j]
            for i in 0..2 {
                for j in 0..2 {
                    let v = rho.get(i, j) + rho.get(2 + i, 2 + j);
                    out.set(i, j, v);
                }
            }
        }
    }
    Ok(out)
}

/// `S(rho) = -sum lambda ln lambda` in nats, with `0 ln 0 = 0` and
/// eigenvalues clipped to `[0, 1]` after the [`EIG_CLIP`] zero window.
pub fn von_neumann_entropy(rho: &CMatrix) -> Result<f64, MatError> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(MatError::NotDensity(format!("trace = {}", tr)));
    }
    let eigs = herm_eigvals(rho)?;
    let mut s = 0.0;
    for lambda in eigs {
        if lambda < EIG_NEGATIVE_LIMIT {
            return Err(MatError::NotDensity(format!("eigenvalue {lambda} < 0")));
        }
        let l = if lambda.abs() <= EIG_CLIP { 0.0 } else { lambda.clamp(0.0, 1.0) };
        if l > 0.0 {
            s -= l * l.ln();
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn assert_mat_close(a: &CMatrix, b: &CMatrix, tol: f64) {
        assert_eq!(a.dim(), b.dim());
        let dev = a.sub(b).max_abs();
        assert!(dev <= tol, "matrices differ by {dev:.3e} > {tol:.3e}");
    }

    #[test]
    fn kron_identity_and_diagonal() {
        let i2 = CMatrix::identity(2);
        assert_mat_close(&kron(&i2, &i2).unwrap(), &CMatrix::identity(4), 0.0);
        let zz = kron(&sigma_z(), &sigma_z()).unwrap();
        let expect = CMatrix::diagonal(&[C64::ONE, -C64::ONE, -C64::ONE, C64::ONE]);
        assert_mat_close(&zz, &expect, 0.0);
    }

    #[test]
    fn kron_matches_index_formula_oracle() {
        // Oracle: (a kron b)[2i+k][2j+l] = a[i][j] * b[k][l], checked entry
        // by entry on sigma_x kron sigma_z and on random-ish fixed matrices.
        let cases = [
            (sigma_x(), sigma_z()),
            (
                CMatrix::from_entries(
                    2,
                    vec![c(0.3, -0.1), c(1.2, 0.5), c(-0.7, 0.0), c(0.0, 2.0)],
                )
                .unwrap(),
                CMatrix::from_entries(
                    2,
                    vec![c(-1.0, 0.4), c(0.6, 0.6), c(0.9, -1.1), c(0.2, 0.0)],
                )
                .unwrap(),
            ),
        ];
        for (a, b) in &cases {
            let k = kron(a, b).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    for p in 0..2 {
                        for l in 0..2 {
                            let expect = a.get(i, j) * b.get(p, l);
                            assert!((k.get(2 * i + p, 2 * j + l) - expect).norm() == 0.0);
                        }
                    }
                }
            }
        }
        // Block structure of sigma_x kron sigma_z: [[0, sz], [sz, 0]].
        let k = kron(&sigma_x(), &sigma_z()).unwrap();
        assert_eq!(k.get(0, 2), C64::ONE);
        assert_eq!(k.get(1, 3), -C64::ONE);
        assert_eq!(k.get(2, 0), C64::ONE);
        assert_eq!(k.get(3, 1), -C64::ONE);
        assert_eq!(k.get(0, 0), C64::ZERO);
    }

    #[test]
    fn kron_rejects_wrong_dims() {
        let i4 = CMatrix::identity(4);
        assert!(matches!(
            kron(&i4, &CMatrix::identity(2)),
            Err(MatError::DimMismatch(_))
        ));
    }

    #[test]
    fn mat_exp_zero_and_diagonal() {
        let z = CMatrix::zeros(4);
        let e = mat_exp(&z, c(3.0, -2.0)).unwrap();
        assert_mat_close(&e, &CMatrix::identity(4), 1e-15);

        let d = CMatrix::diagonal(&[c(1.0, 0.0), c(-0.5, 0.0), c(0.0, 1.0), c(2.0, -1.0)]);
        let s = c(0.3, 0.7);
        let e = mat_exp(&d, s).unwrap();
        for i in 0..4 {
            let expect = (s * d.get(i, i)).exp();
            assert!((e.get(i, i) - expect).norm() < 1e-13);
        }
    }

    /// 40-term Taylor series oracle, no scaling tricks.
    fn taylor_exp_oracle(m: &CMatrix, scale: C64) -> CMatrix {
        let a = m.scale(scale);
        let mut sum = CMatrix::identity(m.dim());
        let mut term = CMatrix::identity(m.dim());
        for k in 1..=40u32 {
            term = term.matmul(&a).scale(C64::new(1.0 / k as f64, 0.0));
            sum = sum.add(&term);
        }
        sum
    }

    #[test]
    fn mat_exp_matches_taylor_oracle_on_generic_4x4() {
        // Non-Hermitian generator shaped like the drift operator at
        // omega = gamma = coupling = 1, exponentiated with scale -0.01i.
        let h = crate::qjump::build_effective_hamiltonian(&crate::qjump::SimParams {
            omega: 1.0,
            gamma: 1.0,
            coupling: 1.0,
            ..Default::default()
        });
        let scale = c(0.0, -0.01);
        let fast = mat_exp(&h, scale).unwrap();
        let oracle = taylor_exp_oracle(&h, scale);
        let dev = fast.sub(&oracle).max_abs();
        assert!(dev <= 1e-12, "deviation {dev:.3e}");
    }

    #[test]
    fn mat_exp_semigroup_and_unitarity() {
        let h = crate::qjump::build_hamiltonian(&crate::qjump::SimParams {
            omega: 1.3,
            coupling: 0.7,
            ..Default::default()
        });
        let s = c(0.0, -0.4);
        let t = c(0.0, -0.35);
        let lhs = mat_exp(&h, s).unwrap().matmul(&mat_exp(&h, t).unwrap());
        let rhs = mat_exp(&h, s + t).unwrap();
        assert_mat_close(&lhs, &rhs, 1e-10);

        // exp(-i dt H) for Hermitian H is unitary.
        let u = mat_exp(&h, c(0.0, -0.21)).unwrap();
        let prod = u.adjoint().matmul(&u);
        assert_mat_close(&prod, &CMatrix::identity(4), 1e-10);
    }

    #[test]
    fn mat_exp_rejects_non_finite() {
        let mut m = CMatrix::zeros(4);
        m.set(1, 2, c(f64::NAN, 0.0));
        assert!(matches!(
            mat_exp(&m, C64::ONE),
            Err(MatError::NonFinite { row: 1, col: 2 })
        ));
    }

    #[test]
    fn eigvals_trivial_cases() {
        let eigs = herm_eigvals(&CMatrix::identity(4)).unwrap();
        assert_eq!(eigs, vec![1.0, 1.0, 1.0, 1.0]);

        let d = CMatrix::diagonal(&[C64::ONE, -C64::ONE, -C64::ONE, C64::ONE]);
        let eigs = herm_eigvals(&d).unwrap();
        assert_eq!(eigs, vec![-1.0, -1.0, 1.0, 1.0]);

        // rho_A of a Bell state is maximally mixed.
        let bell = CVector::new(vec![
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C64::ZERO,
            C64::ZERO,
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ]);
        let rho_a = partial_trace(&bell.projector(), Subsystem::A).unwrap();
        let eigs = herm_eigvals(&rho_a).unwrap();
        assert!((eigs[0] - 0.5).abs() < 1e-12 && (eigs[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn eigvals_sum_to_trace_and_conjugation_invariant() {
        // Fixed Hermitian matrix with all structure populated.
        let mut m = CMatrix::zeros(4);
        let vals = [
            (0, 0, c(0.9, 0.0)),
            (1, 1, c(-0.4, 0.0)),
            (2, 2, c(0.1, 0.0)),
            (3, 3, c(1.7, 0.0)),
            (0, 1, c(0.3, 0.2)),
            (0, 2, c(-0.5, 0.7)),
            (0, 3, c(0.0, -0.9)),
            (1, 2, c(0.8, 0.1)),
            (1, 3, c(-0.2, -0.3)),
            (2, 3, c(0.4, 0.6)),
        ];
        for &(i, j, v) in &vals {
            m.set(i, j, v);
            if i != j {
                m.set(j, i, v.conj());
            }
        }
        let eigs = herm_eigvals(&m).unwrap();
        let sum: f64 = eigs.iter().sum();
        assert!((sum - m.trace().re).abs() <= 1e-10);

        // Conjugate by the unitary exp(-i 0.6 H) for a Hermitian H.
        let h = kron(&sigma_x(), &sigma_z()).unwrap();
        let u = mat_exp(&h, c(0.0, -0.6)).unwrap();
        let m2 = u.adjoint().matmul(&m).matmul(&u);
        let eigs2 = herm_eigvals(&m2).unwrap();
        for (a, b) in eigs.iter().zip(&eigs2) {
            assert!((a - b).abs() <= 1e-8);
        }
    }

    #[test]
    fn eigvals_rejects_non_hermitian() {
        let mut m = CMatrix::identity(4);
        m.set(0, 1, c(0.1, 0.0));
        assert!(matches!(herm_eigvals(&m), Err(MatError::NotHermitian { .. })));
    }

    #[test]
    fn partial_trace_product_and_bell() {
        // |ee><ee| keeps to |e><e|.
        let ee = CVector::basis_state(4, 0).projector();
        let rho_a = partial_trace(&ee, Subsystem::A).unwrap();
        assert_mat_close(&rho_a, &number_op(), 0.0);

        let bell = CVector::new(vec![
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C64::ZERO,
            C64::ZERO,
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ]);
        let rho_a = partial_trace(&bell.projector(), Subsystem::A).unwrap();
        assert_mat_close(&rho_a, &CMatrix::identity(2).scale(c(0.5, 0.0)), 1e-15);
    }

    /// Index-summation oracle: rho_B[i][j] = sum_k rho[2k+i][2k+j] computed
    /// from scratch on a generic product state rho1 kron rho2.
    #[test]
    fn partial_trace_matches_summation_oracle_on_product() {
        let rho1 = CMatrix::from_entries(
            2,
            vec![c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)],
        )
        .unwrap();
        let rho2 = CMatrix::from_entries(
            2,
            vec![c(0.4, 0.0), c(-0.2, 0.1), c(-0.2, -0.1), c(0.6, 0.0)],
        )
        .unwrap();
        // kron here is only defined for 2x2 factors, which is what we need.
        let rho = kron(&rho1, &rho2).unwrap();

        let kept = partial_trace(&rho, Subsystem::B).unwrap();
        assert_mat_close(&kept, &rho2, 1e-15);

        let mut oracle = CMatrix::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = C64::ZERO;
                for k in 0..2 {
                    acc += rho.get(2 * k + i, 2 * k + j);
                }
                oracle.set(i, j, acc);
            }
        }
        assert_mat_close(&kept, &oracle, 0.0);

        let kept_a = partial_trace(&rho, Subsystem::A).unwrap();
        assert_mat_close(&kept_a, &rho1, 1e-15);
        // Trace preserved.
        assert!((kept.trace().re - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn entropy_pure_mixed_and_bounds() {
        let pure = CVector::basis_state(4, 2).projector();
        assert!(von_neumann_entropy(&pure).unwrap().abs() <= 1e-12);

        let mixed4 = CMatrix::identity(4).scale(c(0.25, 0.0));
        assert!((von_neumann_entropy(&mixed4).unwrap() - 4f64.ln()).abs() <= 1e-12);

        let mixed2 = CMatrix::identity(2).scale(c(0.5, 0.0));
        assert!((von_neumann_entropy(&mixed2).unwrap() - 2f64.ln()).abs() <= 1e-12);
    }

    #[test]
    fn entropy_rejects_bad_density_matrices() {
        let not_trace_one = CMatrix::identity(4);
        assert!(matches!(
            von_neumann_entropy(&not_trace_one),
            Err(MatError::NotDensity(_))
        ));

        let negative = CMatrix::diagonal(&[
            c(1.1, 0.0),
            c(-0.1, 0.0),
            C64::ZERO,
            C64::ZERO,
        ]);
        assert!(matches!(
            von_neumann_entropy(&negative),
            Err(MatError::NotDensity(_))
        ));
    }

    #[test]
    fn schmidt_symmetry_of_pure_states() {
        // S(rho_A) = S(rho_B) for any pure two-qubit projector.
        let states = [
            vec![c(0.5, 0.1), c(-0.3, 0.4), c(0.2, -0.6), c(0.1, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0), c(-1.0, 0.5)],
            vec![c(0.0, 0.3), c(0.9, 0.0), c(0.0, 0.0), c(0.2, 0.2)],
        ];
        for amps in states {
            let psi = CVector::new(amps).normalized();
            let rho = psi.projector();
            let sa = von_neumann_entropy(&partial_trace(&rho, Subsystem::A).unwrap()).unwrap();
            let sb = von_neumann_entropy(&partial_trace(&rho, Subsystem::B).unwrap()).unwrap();
            assert!((sa - sb).abs() <= 1e-8, "Schmidt asymmetry {:.3e}", sa - sb);
        }
    }

    #[test]
    fn basis_index_convention() {
        assert_eq!(basis_index(1, 1), 0); // ee
        assert_eq!(basis_index(1, 0), 1); // eg
        assert_eq!(basis_index(0, 1), 2); // ge
        assert_eq!(basis_index(0, 0), 3); // gg
    }
}
