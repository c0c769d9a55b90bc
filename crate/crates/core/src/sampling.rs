//! SWAP-test shot simulation and the shot-estimated kernel matrix.
//!
//! Each kernel entry is the mean of m simulated shots. Two shot models are
//! provided: an idealized Bernoulli whose outcome mean is the overlap
//! directly (per-shot range 1), and the physical SWAP-test statistics with
//! accept probability (1+t)/2 mapped to outcomes in {-1, +1} (per-shot
//! range 2). Entry (i, j) draws from a stream derived from (seed, i, j), so
//! results are reproducible regardless of evaluation order.

use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;

use crate::linalg::KernelMatrix;
use crate::rng::{entry_rng, uniform_f64};
use crate::{Error, Result};

/// Which shot statistics to simulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapTestMode {
    /// Bernoulli outcome in {0, 1} with mean exactly t.
    Idealized,
    /// Outcome in {-1, +1}; accept probability (1+t)/2, so the mean is t.
    Physical,
}

/// Shot-estimated kernel matrix together with its sampling parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedKernel {
    matrix: KernelMatrix,
    shots: u64,
    mode: SwapTestMode,
    seed: u64,
}

impl EstimatedKernel {
    pub fn matrix(&self) -> &KernelMatrix {
        &self.matrix
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn mode(&self) -> SwapTestMode {
        self.mode
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }
}

/// One simulated SWAP-test outcome for overlap t.
///
/// Unbiased in both modes: the returned value has expectation exactly t.
pub fn swap_test_shot(t: f64, mode: SwapTestMode, rng: &mut ChaCha8Rng) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidOverlap { t });
    }
    let u = uniform_f64(rng);
    Ok(match mode {
        SwapTestMode::Idealized => {
            if u < t {
                1.0
            } else {
                0.0
            }
        }
        SwapTestMode::Physical => {
            if u < 0.5 * (1.0 + t) {
                1.0
            } else {
                -1.0
            }
        }
    })
}

/// Mean of m shots: the per-entry estimator.
pub fn estimate_entry(t: f64, m: u64, mode: SwapTestMode, rng: &mut ChaCha8Rng) -> Result<f64> {
    if m == 0 {
        return Err(Error::ZeroShots);
    }
    let mut sum = 0.0;
    for _ in 0..m {
        sum += swap_test_shot(t, mode, rng)?;
    }
    Ok(sum / m as f64)
}

/// Shot-estimated kernel: every entry of Ktilde, diagonal included, is
/// replaced by the mean of m shots drawn from the (seed, i, j) stream.
///
/// The estimate is entrywise unbiased for Ktilde. Diagonal entries are
/// purity overlaps and get shot noise too.
pub fn estimate_kernel(
    ktilde: &KernelMatrix,
    m: u64,
    mode: SwapTestMode,
    seed: u64,
) -> Result<EstimatedKernel> {
    if m == 0 {
        return Err(Error::ZeroShots);
    }
    let n = ktilde.size();
    for i in 0..n {
        for j in i..n {
            let t = ktilde.get(i, j);
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidOverlap { t });
            }
        }
    }
    let mut failed = None;
    let matrix = KernelMatrix::from_fn(n, |i, j| {
        let mut rng = entry_rng(seed, i, j);
        match estimate_entry(ktilde.get(i, j), m, mode, &mut rng) {
            Ok(v) => v,
            Err(e) => {
                failed = Some(e);
                0.0
            }
        }
    })?;
    if let Some(e) = failed {
        return Err(e);
    }
    Ok(EstimatedKernel {
        matrix,
        shots: m,
        mode,
        seed,
    })
}

/// Per-coordinate shot estimates for a row of test-point overlaps.
pub fn estimate_test_row(
    t_row: &[f64],
    m: u64,
    mode: SwapTestMode,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    t_row
        .iter()
        .map(|&t| estimate_entry(t, m, mode, rng))
        .collect()
}
