//! Seeded trial campaigns: one trial draws a fresh problem, estimates the
//! training kernel, checks the concentration event, fits the regression,
//! and measures the empirical generalization error against the bounds.

use std::time::Instant;

use serde::Serialize;

use qkernel_core::bounds::{hoeffding_failure_bound, remark1_rhs, theorem2_rhs};
use qkernel_core::learning::{generalization_error, KernelSource, TrainedModel};
use qkernel_core::linalg::{loewner_geq, min_eig, psd_shift_event, KernelMatrix, LOEWNER_TOL};
use qkernel_core::rng::{derive_seed, stream_rng};
use qkernel_core::sampling::estimate_kernel;

use crate::config::ExperimentConfig;
use crate::problem::generate_problem;
use crate::Result;

/// Seed of trial `trial_id`'s problem stream under campaign root `root`.
/// The gen subcommand uses trial 0's seed so a written problem file matches
/// the first trial of a run with the same config.
pub fn trial_problem_seed(root: u64, trial_id: u64) -> u64 {
    derive_seed(derive_seed(root, &[trial_id]), &[0])
}

/// Outcome of a single trial.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub trial_id: u64,
    /// The trial's derived seed (all trial streams branch from it).
    pub seed: u64,
    /// Concentration event: Khat + (lambda/2) I >= Ktilde >= 0 for the
    /// shot-estimated source, plain positive semidefiniteness otherwise.
    pub event_ok: bool,
    /// Mean |h(x) - tr(rho_x O)| over the test draw; absent when the event
    /// failed and training was skipped.
    pub empirical_error: Option<f64>,
    /// Noiseless consolidated bound on the exact kernel.
    pub remark1_bound: f64,
    /// Noisy-pipeline bound: the same with the 1/(1-p) inflation.
    pub theorem2_bound: f64,
    /// empirical_error / theorem2_bound; absent with the error.
    pub error_to_bound_ratio: Option<f64>,
    /// Smallest eigenvalue of the training kernel actually used.
    pub min_eig_khat: f64,
    /// max_ij |Khat - Ktilde| for the shot-estimated source, 0 otherwise.
    pub max_abs_dev: f64,
    /// Wall-clock seconds for the trial (excluded from the CSV schema).
    pub wall_time_s: f64,
}

/// Run one trial. Event failures are recorded, never propagated: a trial
/// whose estimated kernel violates the event (or cannot be solved) yields a
/// well-formed record with `event_ok = false` and no error estimate.
pub fn run_trial(config: &ExperimentConfig, trial_id: u64) -> Result<RunRecord> {
    let start = Instant::now();
    let trial_seed = derive_seed(config.seed, &[trial_id]);
    let problem = generate_problem(config, derive_seed(trial_seed, &[0]))?;
    let estimation_seed = derive_seed(trial_seed, &[1]);
    let mut eval_rng = stream_rng(derive_seed(trial_seed, &[2]));

    let n = config.train_size;
    let m = config.resolved_shots();
    let lambda = config.lambda;

    let (kernel, mut event_ok, max_abs_dev) = match config.kernel_source() {
        KernelSource::ExactK => {
            let kernel = problem.kernel_exact.clone();
            let ok = loewner_geq(&kernel, &KernelMatrix::zeros(n), LOEWNER_TOL)?;
            (kernel, ok, 0.0)
        }
        KernelSource::ClosedFormNoisy => {
            let kernel = problem.kernel_noisy.clone();
            let ok = loewner_geq(&kernel, &KernelMatrix::zeros(n), LOEWNER_TOL)?;
            (kernel, ok, 0.0)
        }
        KernelSource::ShotEstimated => {
            let estimate = estimate_kernel(
                &problem.kernel_noisy,
                m,
                config.swap_mode(),
                estimation_seed,
            )?;
            let ok = psd_shift_event(estimate.matrix(), &problem.kernel_noisy, lambda)?;
            let dev = estimate.matrix().sub(&problem.kernel_noisy)?.max_abs();
            (estimate.matrix().clone(), ok, dev)
        }
    };

    let min_eig_khat = min_eig(&kernel)?;
    let remark1 = remark1_rhs(&problem.labels, &problem.kernel_exact, lambda, config.delta)?;
    let theorem2 = theorem2_rhs(
        &problem.labels,
        &problem.kernel_exact,
        lambda,
        config.p,
        config.delta,
    )?;

    let mut empirical_error = None;
    if event_ok {
        match TrainedModel::train(
            &kernel,
            &problem.labels,
            lambda,
            problem.training_set,
            config.kernel_source(),
            config.test_eval(),
            config.swap_mode(),
        ) {
            Ok(model) => {
                let err = generalization_error(
                    &model,
                    &problem.observable,
                    config.test_size,
                    &mut eval_rng,
                    config.p,
                    m,
                )?;
                empirical_error = Some(err);
            }
            Err(qkernel_core::Error::NotPositiveDefinite) => {
                event_ok = false;
            }
            Err(e) => return Err(e.into()),
        }
    }

    Ok(RunRecord {
        trial_id,
        seed: trial_seed,
        event_ok,
        empirical_error,
        remark1_bound: remark1.total,
        theorem2_bound: theorem2.total,
        error_to_bound_ratio: empirical_error.map(|e| e / theorem2.total),
        min_eig_khat,
        max_abs_dev,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// A completed campaign: the config it ran under and one record per trial.
#[derive(Debug, Clone, Serialize)]
pub struct Campaign {
    pub config: ExperimentConfig,
    pub records: Vec<RunRecord>,
}

pub fn run_campaign(config: &ExperimentConfig) -> Result<Campaign> {
    config.validate()?;
    let records = (0..config.trials)
        .map(|t| run_trial(config, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(Campaign {
        config: config.clone(),
        records,
    })
}

/// Aggregate statistics over a campaign's records.
#[derive(Debug, Clone, Serialize)]
pub struct CampaignSummary {
    pub trials: u64,
    pub event_failures: u64,
    pub event_failure_rate: f64,
    /// Matrix-Hoeffding failure probability N exp(-lambda^2 m / 8N) at the
    /// resolved shot count (vacuous when above 1).
    pub hoeffding_failure_bound: f64,
    pub median_error: Option<f64>,
    pub iqr_error: Option<f64>,
    pub median_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub mean_remark1_bound: f64,
    pub mean_theorem2_bound: f64,
    pub total_wall_time_s: f64,
}

/// Quantile by linear interpolation between closest ranks.
/// Pre: values sorted ascending and nonempty, q in [0, 1].
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn sorted_finite(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    v
}

impl Campaign {
    pub fn summary(&self) -> CampaignSummary {
        let trials = self.records.len() as u64;
        let event_failures = self.records.iter().filter(|r| !r.event_ok).count() as u64;
        let errors = sorted_finite(self.records.iter().filter_map(|r| r.empirical_error));
        let ratios = sorted_finite(self.records.iter().filter_map(|r| r.error_to_bound_ratio));
        let mean = |f: fn(&RunRecord) -> f64| {
            self.records.iter().map(f).sum::<f64>() / trials as f64
        };
        CampaignSummary {
            trials,
            event_failures,
            event_failure_rate: event_failures as f64 / trials as f64,
            hoeffding_failure_bound: hoeffding_failure_bound(
                self.config.train_size,
                self.config.lambda,
                self.config.resolved_shots() as f64,
            )
            .expect("validated config"),
            median_error: (!errors.is_empty()).then(|| quantile(&errors, 0.5)),
            iqr_error: (!errors.is_empty())
                .then(|| quantile(&errors, 0.75) - quantile(&errors, 0.25)),
            median_ratio: (!ratios.is_empty()).then(|| quantile(&ratios, 0.5)),
            max_ratio: ratios.last().copied(),
            mean_remark1_bound: mean(|r: &RunRecord| r.remark1_bound),
            mean_theorem2_bound: mean(|r: &RunRecord| r.theorem2_bound),
            total_wall_time_s: self.records.iter().map(|r| r.wall_time_s).sum(),
        }
    }

    pub fn to_csv(&self) -> String {
        records_to_csv(&self.records)
    }

    /// Full JSON document: config, summary, and per-trial records.
    pub fn to_json_pretty(&self) -> String {
        let doc = serde_json::json!({
            "config": self.config,
            "summary": self.summary(),
            "records": self.records,
        });
        serde_json::to_string_pretty(&doc).expect("campaign serializes")
    }
}

/// Frozen CSV schema for trial records. Columns and float formatting are a
/// stable interface: floats print as {:.16e} (17 significant digits, exact
/// f64 round trip), optional fields print empty when absent, and wall time
/// is deliberately excluded so repeated runs are byte-identical.
pub const CSV_HEADER: &str = "trial_id,seed,event_ok,empirical_error,remark1_bound,\
theorem2_bound,error_to_bound_ratio,min_eig_khat,max_abs_dev";

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

pub fn records_to_csv(records: &[RunRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{:.16e},{:.16e},{},{:.16e},{:.16e}\n",
            r.trial_id,
            r.seed,
            r.event_ok,
            fmt_opt(r.empirical_error),
            r.remark1_bound,
            r.theorem2_bound,
            fmt_opt(r.error_to_bound_ratio),
            r.min_eig_khat,
            r.max_abs_dev,
        ));
    }
    out
}
