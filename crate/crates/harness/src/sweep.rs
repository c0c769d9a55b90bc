//! Parameter sweeps: run one campaign per value along a single axis and
//! aggregate each campaign into a summary row.

use serde::Serialize;

use crate::config::{ExperimentConfig, ShotsSpec};
use crate::trial::{quantile, run_campaign, Campaign};
use crate::{HarnessError, Result};

/// The config field a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Shots per kernel entry m.
    Shots,
    /// Depolarizing rate p.
    Noise,
    /// Training-set size N.
    TrainSize,
    /// Regularization strength lambda.
    Lambda,
}

impl SweepAxis {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "m" | "shots" => Ok(SweepAxis::Shots),
            "p" | "noise" => Ok(SweepAxis::Noise),
            "n" | "train_size" => Ok(SweepAxis::TrainSize),
            "lambda" => Ok(SweepAxis::Lambda),
            other => Err(HarnessError::Config(format!(
                "unknown sweep axis \"{other}\" (expected m, p, n, or lambda)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Shots => "m",
            SweepAxis::Noise => "p",
            SweepAxis::TrainSize => "n",
            SweepAxis::Lambda => "lambda",
        }
    }
}

fn require_count(axis: &str, value: f64) -> Result<u64> {
    if !value.is_finite() || value < 1.0 || value.fract() != 0.0 || value > u64::MAX as f64 {
        return Err(HarnessError::Config(format!(
            "{axis} sweep values must be positive integers, found {value}"
        )));
    }
    Ok(value as u64)
}

/// Produce the campaign config for one sweep value; the result is validated
/// like any other config, so budget and range violations surface here.
pub fn apply_axis(
    base: &ExperimentConfig,
    axis: SweepAxis,
    value: f64,
) -> Result<ExperimentConfig> {
    let mut config = base.clone();
    match axis {
        SweepAxis::Shots => config.shots = ShotsSpec::Fixed(require_count("m", value)?),
        SweepAxis::Noise => config.p = value,
        SweepAxis::TrainSize => config.train_size = require_count("n", value)? as usize,
        SweepAxis::Lambda => config.lambda = value,
    }
    config.validate()?;
    Ok(config)
}

/// Aggregates of one campaign at one axis value.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub trials: u64,
    pub event_failures: u64,
    pub event_failure_rate: f64,
    /// Median and interquartile range of the empirical error over trials
    /// whose event held; absent when every trial failed.
    pub median_error: Option<f64>,
    pub iqr_error: Option<f64>,
    pub median_ratio: Option<f64>,
    pub mean_remark1_bound: f64,
    pub mean_theorem2_bound: f64,
    /// Mean of (theorem2_bound - confidence term): the regularizer term that
    /// scales as 1/(1-p) along a noise sweep.
    pub mean_theorem2_reg: f64,
}

/// A completed sweep: one row and one full campaign per value.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub base: ExperimentConfig,
    pub rows: Vec<SweepRow>,
    pub campaigns: Vec<Campaign>,
}

fn confidence_term(config: &ExperimentConfig) -> f64 {
    ((1.0 / config.delta).ln() / config.train_size as f64).sqrt()
}

fn aggregate(value: f64, campaign: &Campaign) -> SweepRow {
    let summary = campaign.summary();
    let conf = confidence_term(&campaign.config);
    let mut ratios: Vec<f64> = campaign
        .records
        .iter()
        .filter_map(|r| r.error_to_bound_ratio)
        .collect();
    ratios.sort_by(|a, b| a.partial_cmp(b).expect("finite ratios"));
    let regs: Vec<f64> = campaign
        .records
        .iter()
        .map(|r| r.theorem2_bound - conf)
        .collect();
    SweepRow {
        value,
        trials: summary.trials,
        event_failures: summary.event_failures,
        event_failure_rate: summary.event_failure_rate,
        median_error: summary.median_error,
        iqr_error: summary.iqr_error,
        median_ratio: (!ratios.is_empty()).then(|| quantile(&ratios, 0.5)),
        mean_remark1_bound: summary.mean_remark1_bound,
        mean_theorem2_bound: summary.mean_theorem2_bound,
        mean_theorem2_reg: regs.iter().sum::<f64>() / regs.len() as f64,
    }
}

/// Run one campaign per value. Values must be strictly increasing so the
/// row order of the output table is meaningful.
pub fn run_sweep(
    base: &ExperimentConfig,
    axis: SweepAxis,
    values: &[f64],
) -> Result<SweepTable> {
    if values.is_empty() {
        return Err(HarnessError::Config("sweep needs at least one value".into()));
    }
    if !values.windows(2).all(|w| w[0] < w[1]) {
        return Err(HarnessError::Config(
            "sweep values must be strictly increasing".into(),
        ));
    }
    let mut rows = Vec::with_capacity(values.len());
    let mut campaigns = Vec::with_capacity(values.len());
    for &value in values {
        let config = apply_axis(base, axis, value)?;
        let campaign = run_campaign(&config)?;
        rows.push(aggregate(value, &campaign));
        campaigns.push(campaign);
    }
    Ok(SweepTable {
        axis,
        base: base.clone(),
        rows,
        campaigns,
    })
}

/// Frozen CSV schema for sweep rows, same float conventions as the trial CSV.
pub const SWEEP_CSV_HEADER: &str = "axis,value,trials,event_failures,event_failure_rate,\
median_error,iqr_error,median_ratio,mean_remark1_bound,mean_theorem2_bound,mean_theorem2_reg";

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{},{:.16e},{},{},{:.16e},{},{},{},{:.16e},{:.16e},{:.16e}\n",
                self.axis.name(),
                row.value,
                row.trials,
                row.event_failures,
                row.event_failure_rate,
                fmt_opt(row.median_error),
                fmt_opt(row.iqr_error),
                fmt_opt(row.median_ratio),
                row.mean_remark1_bound,
                row.mean_theorem2_bound,
                row.mean_theorem2_reg,
            ));
        }
        out
    }

    /// JSON document: base config, axis, rows, and per-value summaries.
    pub fn to_json_pretty(&self) -> String {
        let summaries: Vec<_> = self.campaigns.iter().map(|c| c.summary()).collect();
        let doc = serde_json::json!({
            "axis": self.axis.name(),
            "base_config": self.base,
            "rows": self.rows,
            "campaign_summaries": summaries,
        });
        serde_json::to_string_pretty(&doc).expect("sweep serializes")
    }
}
