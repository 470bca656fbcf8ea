//! permlab: exact and Monte Carlo tools for the noise sensitivity of
//! squared permanents of Gaussian matrices, and for comparing ideal against
//! noise-averaged BosonSampling distributions at small sizes.
//!
//! The crate is organized around a handful of exact kernels:
//!
//! - [`permanent`]: Ryser's O(2^n n) permanent, multiset minors, and the
//!   Gram permanent `perm(A A*)` that normalizes BosonSampling.
//! - [`spectral`]: closed-form degree weights of |perm|^2, fourth moments,
//!   correlation curves between ideal and noisy values, and truncation
//!   tails.
//! - [`expansion`]: evaluation of the individual degree components of
//!   |perm|^2, the exact conditional expectation of the noisy squared
//!   permanent, its low-degree truncations, and basis-coefficient queries.
//! - [`boson`]: exact ideal and noise-averaged distributions over multiset
//!   outcomes, with comparison metrics.
//! - [`estimate`]: seeded, reproducible Monte Carlo estimators that
//!   cross-check every closed form above.
//!
//! All randomness is derived from explicit seeds through counter-addressed
//! substreams ([`matrix::sample_gaussian`] and friends), so every number
//! this crate produces is reproducible bit for bit, including under
//! internal parallelism.

pub mod boson;
pub mod cli;
pub mod error;
pub mod estimate;
pub mod expansion;
pub mod matrix;
pub mod permanent;
mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use matrix::{
    apply_noise, correlated_pair, sample_gaussian, EnsembleKind, GaussianMatrix, NoiseParameter,
};
pub use permanent::{gram_permanent, minor, permanent, permanent_naive, MultisetOutcome};
