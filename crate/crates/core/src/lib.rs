//! Core primitives for simulating the noisy quantum kernel method.
//!
//! The crate covers the full pipeline at desk scale:
//!
//! - [`quantum`] — density-matrix feature states, angle encodings, the
//!   depolarizing channel, observables, and closed-form noisy kernels.
//! - [`sampling`] — SWAP-test shot simulation and the shot-estimated kernel
//!   matrix with reproducible per-entry random streams.
//! - [`linalg`] — symmetric eigendecomposition, SPD solves, and the
//!   Loewner-order comparisons behind the PSD-shift correction.
//! - [`learning`] — regularized kernel regression on the shifted estimated
//!   kernel and Monte Carlo generalization-error estimation.
//! - [`bounds`] — the generalization-bound right-hand sides, the SWAP-test
//!   shot threshold, and the matrix-Hoeffding failure bound.
//!
//! The crate is `no_std` (with `alloc`); float math goes through
//! `num-traits`/`libm`. Experiment configuration, file formats, and the CLI
//! live in the companion `qkernel-harness` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod learning;
pub mod linalg;
pub mod quantum;
pub mod rng;
pub mod sampling;

mod error;
pub use error::{Error, Result};

pub use num_complex::Complex64;
pub use rand_chacha;
