//! A population metaheuristic modelled on epidemic social distancing,
//! packaged with the thirteen standard numerical benchmark objectives,
//! transparent baseline optimizers, nonparametric comparison statistics,
//! and a two-channel signal-denoising application.
//!
//! The crate is organized around small, independently testable modules:
//!
//! - [`rng`] — seeded deterministic draws, the chaotic parameter
//!   recurrence, and opposition-based solution generation,
//! - [`benchmarks`] — objective specifications with bounds and
//!   known-optimum metadata,
//! - [`algorithm`] — the optimizer itself: population dynamics, disease
//!   propagation with the social-distancing operator, and termination,
//! - [`baselines`] — random search and particle swarm under the same
//!   result contract,
//! - [`stats`] — descriptive statistics, Wilcoxon, Friedman, and Welch
//!   tests over per-seed outcomes,
//! - [`ecg`] — synthetic ECG generation, Gaussian contamination through a
//!   2x2 mixing model, and unmixing-matrix optimization.

pub mod algorithm;
pub mod baselines;
pub mod benchmarks;
pub mod ecg;
pub mod error;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
