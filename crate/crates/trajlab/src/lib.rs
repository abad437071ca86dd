//! Trajectory-level simulation and analysis of a driven-dissipative
//! two-qubit jump model and a rate-matched classical interacting telegraph
//! model.
//!
//! The crate splits into four parts:
//!
//! * [`matkit`] - dense complex 2x2/4x4 kernels (Kronecker products, matrix
//!   exponential, Hermitian eigenvalues, partial trace, entropy),
//! * [`qjump`] - the quantum-jump Monte Carlo engine,
//! * [`telegraph`] - the classical interacting telegraph-spin model,
//! * [`metrics`] - Lempel-Ziv complexity, correlations, occupancy tables,
//!   and rank/two-sample statistics.

pub mod matkit;
pub mod metrics;
pub mod qjump;
pub mod telegraph;
