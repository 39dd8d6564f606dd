//! Quantum Fisher information for the Unruh temperature seen by accelerated
//! two-level detectors.
//!
//! A uniformly accelerated detector thermalizes against the vacuum at
//! `T = a / 2 pi`. This crate builds the reduced detector states (one
//! detector with initial coherence, or an inertial + accelerated entangled
//! pair), computes the classical/quantum Fisher information they carry about
//! `T`, exposes both the closed-form eigensystems and a self-contained
//! spectral route that cross-checks them, and simulates the optimal
//! estimation protocol shot by shot.
//!
//! Layout:
//! - [`matrix`]: dim 2-4 complex matrices, Jacobi Hermitian eigensolver,
//!   finite differences.
//! - [`qfi`]: Fisher information, symmetric logarithmic derivative, POVMs,
//!   the optimal estimator.
//! - [`detector`]: the physical states, closed-form spectra and Fisher
//!   expressions, concurrence.
//! - [`estimation`]: seeded Monte Carlo runs against the Cramer-Rao bound.
//! - [`rng`]: the counter-based generator those runs draw from.

pub mod detector;
pub mod error;
pub mod estimation;
pub mod matrix;
pub mod qfi;
pub mod rng;

pub use error::{Error, Result};
