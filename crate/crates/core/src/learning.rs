//! Regularized kernel regression in dual form: train on a (possibly shifted,
//! possibly estimated) kernel matrix, predict with clipping, and measure the
//! generalization error by Monte Carlo over fresh inputs.
//!
//! Training reads only the kernel matrix, the labels, and the regularization
//! parameter. It never reads the noise strength p: noise enters training
//! solely through the data handed in, which is what a device would provide.

use alloc::vec::Vec;
use rand_chacha::rand_core::RngCore;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{solve_spd, KernelMatrix};
use crate::quantum::{
    depolarize, encode, hs_inner, sample_input, DensityMatrix, FeatureMapSpec, Observable,
};
use crate::rng::{derive_seed, stream_rng};
use crate::sampling::{estimate_test_row, SwapTestMode};
use crate::{Error, Result};

/// Which kernel matrix the dual coefficients were fit on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSource {
    /// Exact kernel of the pure states.
    ExactK,
    /// Closed-form kernel of the depolarized states.
    ClosedFormNoisy,
    /// Shot-estimated kernel (with the lambda/2 diagonal shift applied by
    /// the caller before training).
    ShotEstimated,
}

/// How test-point kernel rows are produced at evaluation time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestEval {
    /// Exact overlaps with the pure training states.
    ExactRow,
    /// Exact overlaps between depolarized test and training states.
    NoisyExactRow,
    /// Noisy overlaps estimated with m shots per row entry.
    ShotEstimatedRow,
}

/// Training inputs with their encoded pure and depolarized states.
#[derive(Debug, Clone)]
pub struct TrainingSet {
    inputs: Vec<Vec<f64>>,
    pure_states: Vec<DensityMatrix>,
    noisy_states: Vec<DensityMatrix>,
    feature_map: FeatureMapSpec,
}

impl TrainingSet {
    pub fn new(
        inputs: Vec<Vec<f64>>,
        pure_states: Vec<DensityMatrix>,
        noisy_states: Vec<DensityMatrix>,
        feature_map: FeatureMapSpec,
    ) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if pure_states.len() != inputs.len() {
            return Err(Error::DimensionMismatch {
                expected: inputs.len(),
                found: pure_states.len(),
            });
        }
        if noisy_states.len() != inputs.len() {
            return Err(Error::DimensionMismatch {
                expected: inputs.len(),
                found: noisy_states.len(),
            });
        }
        for x in &inputs {
            if x.len() != feature_map.qubits() {
                return Err(Error::DimensionMismatch {
                    expected: feature_map.qubits(),
                    found: x.len(),
                });
            }
        }
        for s in pure_states.iter().chain(&noisy_states) {
            if s.dim() != feature_map.dim() {
                return Err(Error::DimensionMismatch {
                    expected: feature_map.dim(),
                    found: s.dim(),
                });
            }
        }
        Ok(Self {
            inputs,
            pure_states,
            noisy_states,
            feature_map,
        })
    }

    /// Encodes the inputs and depolarizes each state at strength p.
    pub fn from_inputs(
        inputs: Vec<Vec<f64>>,
        feature_map: FeatureMapSpec,
        p: f64,
    ) -> Result<Self> {
        let pure_states: Vec<DensityMatrix> = inputs
            .iter()
            .map(|x| encode(x, &feature_map))
            .collect::<Result<_>>()?;
        let noisy_states: Vec<DensityMatrix> = pure_states
            .iter()
            .map(|s| depolarize(s, p))
            .collect::<Result<_>>()?;
        Self::new(inputs, pure_states, noisy_states, feature_map)
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.inputs
    }

    pub fn pure_states(&self) -> &[DensityMatrix] {
        &self.pure_states
    }

    pub fn noisy_states(&self) -> &[DensityMatrix] {
        &self.noisy_states
    }

    pub fn feature_map(&self) -> &FeatureMapSpec {
        &self.feature_map
    }
}

/// Clip to [-1, 1].
pub fn clip(v: f64) -> f64 {
    v.clamp(-1.0, 1.0)
}

/// Dual coefficients alpha = (kernel + lambda I)^{-1} y.
///
/// Fails with `NotPositiveDefinite` when the regularized matrix is not
/// positive definite, which the caller records as a failed trial.
pub fn dual_coefficients(kernel: &KernelMatrix, labels: &[f64], lambda: f64) -> Result<Vec<f64>> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidRegularization { lambda });
    }
    if labels.len() != kernel.size() {
        return Err(Error::DimensionMismatch {
            expected: kernel.size(),
            found: labels.len(),
        });
    }
    for &y in labels {
        if !y.is_finite() || y.abs() > 1.0 {
            return Err(Error::LabelOutOfRange { value: y });
        }
    }
    solve_spd(&kernel.add_scaled_identity(lambda), labels)
}

/// A fitted model: dual coefficients plus everything needed to evaluate the
/// clipped hypothesis on fresh points.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    alpha: Vec<f64>,
    lambda: f64,
    training_set: TrainingSet,
    kernel_source: KernelSource,
    test_eval: TestEval,
    swap_mode: SwapTestMode,
}

impl TrainedModel {
    /// Fits alpha = (kernel + lambda I)^{-1} y and packages the evaluation
    /// context. The kernel argument must already include any diagonal shift.
    pub fn train(
        kernel: &KernelMatrix,
        labels: &[f64],
        lambda: f64,
        training_set: TrainingSet,
        kernel_source: KernelSource,
        test_eval: TestEval,
        swap_mode: SwapTestMode,
    ) -> Result<Self> {
        if kernel.size() != training_set.len() {
            return Err(Error::DimensionMismatch {
                expected: training_set.len(),
                found: kernel.size(),
            });
        }
        let alpha = dual_coefficients(kernel, labels, lambda)?;
        Ok(Self {
            alpha,
            lambda,
            training_set,
            kernel_source,
            test_eval,
            swap_mode,
        })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn training_set(&self) -> &TrainingSet {
        &self.training_set
    }

    pub fn kernel_source(&self) -> KernelSource {
        self.kernel_source
    }

    pub fn test_eval(&self) -> TestEval {
        self.test_eval
    }

    pub fn swap_mode(&self) -> SwapTestMode {
        self.swap_mode
    }

    /// Clipped prediction from a row of kernel values against the training
    /// points: clip(dot(alpha, k_row)).
    pub fn predict(&self, k_row: &[f64]) -> Result<f64> {
        if k_row.len() != self.alpha.len() {
            return Err(Error::DimensionMismatch {
                expected: self.alpha.len(),
                found: k_row.len(),
            });
        }
        let mut acc = 0.0;
        for (a, k) in self.alpha.iter().zip(k_row) {
            acc += a * k;
        }
        Ok(clip(acc))
    }
}

/// Monte Carlo estimate of E_x |h(x) - tr(rho_x O)| over fresh uniform
/// inputs; always in [0, 2].
///
/// The truth is always the exact noiseless tr(rho_x O). The prediction row
/// follows the model's test_eval mode; p and shots feed only the test-time
/// data generation (depolarizing fresh states, simulating row shots), never
/// the model itself.
pub fn generalization_error(
    model: &TrainedModel,
    observable: &Observable,
    test_points: usize,
    rng: &mut ChaCha8Rng,
    p: f64,
    shots: u64,
) -> Result<f64> {
    if test_points == 0 {
        return Err(Error::EmptyDimension);
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidNoise { p });
    }
    if model.test_eval == TestEval::ShotEstimatedRow && shots == 0 {
        return Err(Error::ZeroShots);
    }
    let fm = model.training_set.feature_map;
    if observable.dim() != fm.dim() {
        return Err(Error::DimensionMismatch {
            expected: fm.dim(),
            found: observable.dim(),
        });
    }

    let base = rng.next_u64();
    let mut total = 0.0;
    for t in 0..test_points {
        let mut x_rng = stream_rng(derive_seed(base, &[t as u64, 0]));
        let x = sample_input(&fm, &mut x_rng);
        let rho = encode(&x, &fm)?;
        let truth = clip(observable.expectation(&rho)?);

        let row: Vec<f64> = match model.test_eval {
            TestEval::ExactRow => model
                .training_set
                .pure_states
                .iter()
                .map(|s| hs_inner(&rho, s))
                .collect::<Result<_>>()?,
            TestEval::NoisyExactRow => {
                let noisy = depolarize(&rho, p)?;
                model
                    .training_set
                    .noisy_states
                    .iter()
                    .map(|s| hs_inner(&noisy, s))
                    .collect::<Result<_>>()?
            }
            TestEval::ShotEstimatedRow => {
                let noisy = depolarize(&rho, p)?;
                let overlaps: Vec<f64> = model
                    .training_set
                    .noisy_states
                    .iter()
                    .map(|s| hs_inner(&noisy, s))
                    .collect::<Result<_>>()?;
                let mut shot_rng = stream_rng(derive_seed(base, &[t as u64, 1]));
                estimate_test_row(&overlaps, shots, model.swap_mode, &mut shot_rng)?
            }
        };
        total += (model.predict(&row)? - truth).abs();
    }
    Ok(total / test_points as f64)
}
