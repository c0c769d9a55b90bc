//! Problem generation: draw training inputs and a random observable from
//! seeded streams, label the inputs, and build the exact and closed-form
//! noisy kernel matrices.

use serde::{Deserialize, Serialize};

use qkernel_core::learning::TrainingSet;
use qkernel_core::linalg::KernelMatrix;
use qkernel_core::quantum::{
    exact_kernel, label, noisy_kernel_closed_form, random_observable, sample_input, Observable,
};
use qkernel_core::rng::{derive_seed, stream_rng};
use qkernel_core::Complex64;

use crate::config::ExperimentConfig;
use crate::{HarnessError, Result};

/// One fully generated regression problem.
pub struct Problem {
    pub inputs: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
    pub observable: Observable,
    pub kernel_exact: KernelMatrix,
    pub kernel_noisy: KernelMatrix,
    pub training_set: TrainingSet,
}

/// Generate a problem from a seed. Inputs come from the (seed, 0) stream and
/// the observable from (seed, 1), so neither depends on the noise rate p:
/// across a p sweep the datasets are bitwise identical and p enters only
/// through the depolarized states and the noisy kernel.
pub fn generate_problem(config: &ExperimentConfig, seed: u64) -> Result<Problem> {
    let fm = config.feature_map();
    let n = config.train_size;

    let mut input_rng = stream_rng(derive_seed(seed, &[0]));
    let inputs: Vec<Vec<f64>> = (0..n).map(|_| sample_input(&fm, &mut input_rng)).collect();

    let mut obs_rng = stream_rng(derive_seed(seed, &[1]));
    let observable = random_observable(&mut obs_rng, fm.dim())?;

    let labels: Vec<f64> = inputs
        .iter()
        .map(|x| label(x, &observable, &fm))
        .collect::<qkernel_core::Result<_>>()?;

    let training_set = TrainingSet::from_inputs(inputs.clone(), fm, config.p)?;
    let kernel_exact = exact_kernel(training_set.pure_states())?;
    let kernel_noisy = noisy_kernel_closed_form(&kernel_exact, config.p, fm.dim())?;

    Ok(Problem {
        inputs,
        labels,
        observable,
        kernel_exact,
        kernel_noisy,
        training_set,
    })
}

/// Serializable snapshot of a generated problem. Complex observable entries
/// are stored as [re, im] pairs; kernels row-major. JSON round trips f64
/// exactly, so reloaded matrices keep their bitwise symmetry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    pub config: ExperimentConfig,
    /// The derived seed the problem was generated from.
    pub seed: u64,
    pub inputs: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
    pub observable: Vec<Vec<[f64; 2]>>,
    pub kernel_exact: Vec<Vec<f64>>,
    pub kernel_noisy: Vec<Vec<f64>>,
}

fn matrix_to_rows(m: &KernelMatrix) -> Vec<Vec<f64>> {
    let n = m.size();
    (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).collect())
        .collect()
}

fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<KernelMatrix> {
    let n = rows.len();
    let mut entries = Vec::with_capacity(n * n);
    for row in rows {
        if row.len() != n {
            return Err(HarnessError::Config(format!(
                "kernel rows must form a square matrix, found row of length {} in a {n} x {n} matrix",
                row.len()
            )));
        }
        entries.extend_from_slice(row);
    }
    KernelMatrix::from_entries(n, entries).map_err(Into::into)
}

impl ProblemFile {
    pub fn from_problem(config: &ExperimentConfig, seed: u64, problem: &Problem) -> Self {
        let dim = problem.observable.dim();
        let observable = (0..dim)
            .map(|r| {
                (0..dim)
                    .map(|c| {
                        let z = problem.observable.entry(r, c);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        ProblemFile {
            config: config.clone(),
            seed,
            inputs: problem.inputs.clone(),
            labels: problem.labels.clone(),
            observable,
            kernel_exact: matrix_to_rows(&problem.kernel_exact),
            kernel_noisy: matrix_to_rows(&problem.kernel_noisy),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn kernel_exact_matrix(&self) -> Result<KernelMatrix> {
        rows_to_matrix(&self.kernel_exact)
    }

    pub fn kernel_noisy_matrix(&self) -> Result<KernelMatrix> {
        rows_to_matrix(&self.kernel_noisy)
    }

    pub fn observable_matrix(&self) -> Result<Observable> {
        let dim = self.observable.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in &self.observable {
            if row.len() != dim {
                return Err(HarnessError::Config(
                    "observable rows must form a square matrix".into(),
                ));
            }
            for pair in row {
                entries.push(Complex64::new(pair[0], pair[1]));
            }
        }
        Observable::from_entries(dim, entries).map_err(Into::into)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qkernel_core::linalg::{loewner_geq, min_eig, LOEWNER_TOL};

    fn small_config() -> ExperimentConfig {
        ExperimentConfig::from_json(
            r#"{"qubits": 2, "train_size": 6, "p": 0.3, "shots": 50, "trials": 2}"#,
        )
        .unwrap()
    }

    #[test]
    fn single_point_kernel_is_one() {
        let config = ExperimentConfig::from_json(r#"{"train_size": 1, "shots": 10}"#).unwrap();
        let problem = generate_problem(&config, 42).unwrap();
        assert_eq!(problem.kernel_exact.size(), 1);
        assert!((problem.kernel_exact.get(0, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_noise_leaves_kernel_unchanged() {
        let config = ExperimentConfig::from_json(
            r#"{"train_size": 5, "p": 0.0, "shots": 10}"#,
        )
        .unwrap();
        let problem = generate_problem(&config, 42).unwrap();
        assert_eq!(problem.kernel_noisy, problem.kernel_exact);
    }

    #[test]
    fn labels_are_bounded_and_kernel_psd() {
        let problem = generate_problem(&small_config(), 9).unwrap();
        assert_eq!(problem.labels.len(), 6);
        for &y in &problem.labels {
            assert!((-1.0..=1.0).contains(&y), "label {y} out of range");
        }
        let zero = KernelMatrix::zeros(6);
        assert!(loewner_geq(&problem.kernel_exact, &zero, LOEWNER_TOL).unwrap());
        assert!(min_eig(&problem.kernel_noisy).unwrap() > 0.0);
    }

    #[test]
    fn same_seed_reproduces_dataset_across_noise_rates() {
        let base = small_config();
        let mut noisier = base.clone();
        noisier.p = 0.7;
        let a = generate_problem(&base, 11).unwrap();
        let b = generate_problem(&noisier, 11).unwrap();
        assert_eq!(a.inputs, b.inputs);
        assert_eq!(a.labels, b.labels);
        assert_eq!(a.kernel_exact, b.kernel_exact);
        assert_ne!(a.kernel_noisy, b.kernel_noisy);
    }

    #[test]
    fn problem_file_round_trips_bitwise() {
        let config = small_config();
        let problem = generate_problem(&config, 33).unwrap();
        let file = ProblemFile::from_problem(&config, 33, &problem);
        let text = file.to_json_pretty();
        let back = ProblemFile::from_json(&text).unwrap();

        assert_eq!(back.labels, file.labels);
        assert_eq!(back.kernel_exact_matrix().unwrap(), problem.kernel_exact);
        assert_eq!(back.kernel_noisy_matrix().unwrap(), problem.kernel_noisy);
        let obs = back.observable_matrix().unwrap();
        for r in 0..obs.dim() {
            for c in 0..obs.dim() {
                assert_eq!(obs.entry(r, c), problem.observable.entry(r, c));
            }
        }
    }
}
