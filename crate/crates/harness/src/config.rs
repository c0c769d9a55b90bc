//! Experiment configuration: JSON-loadable, defaulted field by field,
//! rejecting unknown keys, and validated against the simulator's limits
//! before any work starts.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use qkernel_core::bounds::m_threshold;
use qkernel_core::learning::{KernelSource, TestEval};
use qkernel_core::quantum::{FeatureMapKind, FeatureMapSpec};
use qkernel_core::sampling::SwapTestMode;

use crate::{HarnessError, Result};

/// Largest supported register; D = 2^10 = 1024 keeps dense D x D states cheap.
pub const MAX_QUBITS: usize = 10;

/// Upper limit on total shot draws per campaign: N(N+1)/2 * m * trials.
pub const SHOT_BUDGET: f64 = 1e10;

/// Shot count for kernel estimation: a fixed number or "auto", which resolves
/// to ceil(8 N log(2N/delta) / lambda^2), the concentration threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShotsSpec {
    Auto,
    Fixed(u64),
}

impl Serialize for ShotsSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ShotsSpec::Auto => s.serialize_str("auto"),
            ShotsSpec::Fixed(m) => s.serialize_u64(*m),
        }
    }
}

impl<'de> Deserialize<'de> for ShotsSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ShotsVisitor;

        impl<'de> Visitor<'de> for ShotsVisitor {
            type Value = ShotsSpec;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive integer shot count or the string \"auto\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ShotsSpec, E> {
                Ok(ShotsSpec::Fixed(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ShotsSpec, E> {
                if v < 0 {
                    return Err(E::custom("shot count must be nonnegative"));
                }
                Ok(ShotsSpec::Fixed(v as u64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ShotsSpec, E> {
                if v == "auto" {
                    Ok(ShotsSpec::Auto)
                } else {
                    Err(E::custom(format!("expected \"auto\", found \"{v}\"")))
                }
            }
        }

        d.deserialize_any(ShotsVisitor)
    }
}

/// Feature-map choice, mirroring the core encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodingConfig {
    AngleProduct,
    AngleEntangled,
}

impl From<EncodingConfig> for FeatureMapKind {
    fn from(e: EncodingConfig) -> Self {
        match e {
            EncodingConfig::AngleProduct => FeatureMapKind::AngleProduct,
            EncodingConfig::AngleEntangled => FeatureMapKind::AngleEntangled,
        }
    }
}

/// Swap-test readout convention used for shot estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwapModeConfig {
    Idealized,
    Physical,
}

impl From<SwapModeConfig> for SwapTestMode {
    fn from(m: SwapModeConfig) -> Self {
        match m {
            SwapModeConfig::Idealized => SwapTestMode::Idealized,
            SwapModeConfig::Physical => SwapTestMode::Physical,
        }
    }
}

/// How test-point kernel rows are produced at evaluation time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestEvalConfig {
    ExactRow,
    NoisyExactRow,
    ShotEstimatedRow,
}

impl From<TestEvalConfig> for TestEval {
    fn from(e: TestEvalConfig) -> Self {
        match e {
            TestEvalConfig::ExactRow => TestEval::ExactRow,
            TestEvalConfig::NoisyExactRow => TestEval::NoisyExactRow,
            TestEvalConfig::ShotEstimatedRow => TestEval::ShotEstimatedRow,
        }
    }
}

/// Which matrix the regression trains on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelSourceConfig {
    ExactK,
    ClosedFormNoisy,
    ShotEstimated,
}

impl From<KernelSourceConfig> for KernelSource {
    fn from(k: KernelSourceConfig) -> Self {
        match k {
            KernelSourceConfig::ExactK => KernelSource::ExactK,
            KernelSourceConfig::ClosedFormNoisy => KernelSource::ClosedFormNoisy,
            KernelSourceConfig::ShotEstimated => KernelSource::ShotEstimated,
        }
    }
}

/// Complete description of one experiment campaign. Every field has a
/// default, so a config file only needs the keys it wants to change;
/// unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Register width n; the state dimension is D = 2^n.
    pub qubits: usize,
    /// Feature map used to encode inputs as pure states.
    pub encoding: EncodingConfig,
    /// Number of training points N.
    pub train_size: usize,
    /// Number of held-out evaluation points M.
    pub test_size: usize,
    /// Ridge regularization strength lambda > 0.
    pub lambda: f64,
    /// Depolarizing rate p in [0, 1) applied to every prepared state.
    pub p: f64,
    /// Shots per kernel entry ("auto" resolves the concentration threshold).
    pub shots: ShotsSpec,
    /// Confidence parameter delta in (0, 1).
    pub delta: f64,
    /// Number of independent trials in a campaign.
    pub trials: u64,
    /// Root seed; every stream in the campaign derives from it.
    pub seed: u64,
    /// Swap-test readout convention.
    pub swap_mode: SwapModeConfig,
    /// Test-row evaluation mode.
    pub test_eval: TestEvalConfig,
    /// Training kernel source.
    pub kernel_source: KernelSourceConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            qubits: 2,
            encoding: EncodingConfig::AngleEntangled,
            train_size: 8,
            test_size: 2000,
            lambda: 1.0,
            p: 0.3,
            shots: ShotsSpec::Auto,
            delta: 0.1,
            trials: 20,
            seed: 7,
            swap_mode: SwapModeConfig::Idealized,
            test_eval: TestEvalConfig::ShotEstimatedRow,
            kernel_source: KernelSourceConfig::ShotEstimated,
        }
    }
}

impl ExperimentConfig {
    /// Parse a config from JSON text, apply defaults, and validate.
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Load a config file; a missing or unreadable file is an I/O error,
    /// unparseable or invalid content is a config error.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Shots per kernel entry after resolving "auto" to the concentration
    /// threshold ceil(8 N log(2N/delta) / lambda^2).
    pub fn resolved_shots(&self) -> u64 {
        match self.shots {
            ShotsSpec::Fixed(m) => m,
            ShotsSpec::Auto => {
                let threshold = m_threshold(self.train_size, self.lambda, self.delta)
                    .expect("validated config yields a finite threshold");
                threshold.ceil() as u64
            }
        }
    }

    pub fn feature_map(&self) -> FeatureMapSpec {
        FeatureMapSpec::new(self.qubits, self.encoding.into())
            .expect("validated config has qubits >= 1")
    }

    pub fn swap_mode(&self) -> SwapTestMode {
        self.swap_mode.into()
    }

    pub fn test_eval(&self) -> TestEval {
        self.test_eval.into()
    }

    pub fn kernel_source(&self) -> KernelSource {
        self.kernel_source.into()
    }

    /// Check every field and the total shot budget.
    pub fn validate(&self) -> Result<()> {
        if self.qubits == 0 || self.qubits > MAX_QUBITS {
            return Err(HarnessError::Config(format!(
                "qubits must be in 1..={MAX_QUBITS}, found {}",
                self.qubits
            )));
        }
        if self.train_size == 0 {
            return Err(HarnessError::Config("train_size must be >= 1".into()));
        }
        if self.test_size == 0 {
            return Err(HarnessError::Config("test_size must be >= 1".into()));
        }
        if !self.lambda.is_finite() || self.lambda <= 0.0 {
            return Err(HarnessError::Config(format!(
                "lambda must be a positive finite number, found {}",
                self.lambda
            )));
        }
        if !self.p.is_finite() || !(0.0..1.0).contains(&self.p) {
            return Err(HarnessError::Config(format!(
                "p must lie in [0, 1), found {}",
                self.p
            )));
        }
        if !self.delta.is_finite() || self.delta <= 0.0 || self.delta >= 1.0 {
            return Err(HarnessError::Config(format!(
                "delta must lie in (0, 1), found {}",
                self.delta
            )));
        }
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be >= 1".into()));
        }
        if matches!(self.shots, ShotsSpec::Fixed(0)) {
            return Err(HarnessError::Config("shots must be >= 1".into()));
        }
        let n = self.train_size as f64;
        let pairs = n * (n + 1.0) / 2.0;
        let budget = pairs * self.resolved_shots() as f64 * self.trials as f64;
        if budget > SHOT_BUDGET {
            return Err(HarnessError::Config(format!(
                "shot budget exceeded: N(N+1)/2 * m * trials = {budget:.3e} > {SHOT_BUDGET:.0e}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        let config = ExperimentConfig::default();
        config.validate().expect("defaults validate");
        assert_eq!(config.qubits, 2);
        assert_eq!(config.train_size, 8);
        assert_eq!(config.shots, ShotsSpec::Auto);
    }

    #[test]
    fn empty_json_gives_defaults() {
        let config = ExperimentConfig::from_json("{}").expect("empty object parses");
        assert_eq!(config, ExperimentConfig::default());
    }

    #[test]
    fn partial_json_overrides_only_named_fields() {
        let config = ExperimentConfig::from_json(r#"{"train_size": 16, "p": 0.0}"#).unwrap();
        assert_eq!(config.train_size, 16);
        assert_eq!(config.p, 0.0);
        assert_eq!(config.qubits, ExperimentConfig::default().qubits);
        assert_eq!(config.lambda, ExperimentConfig::default().lambda);
    }

    #[test]
    fn unknown_key_rejected() {
        let err = ExperimentConfig::from_json(r#"{"train_sizes": 16}"#).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("train_sizes"), "{err}");
    }

    #[test]
    fn shots_accepts_number_and_auto() {
        let fixed = ExperimentConfig::from_json(r#"{"shots": 500}"#).unwrap();
        assert_eq!(fixed.shots, ShotsSpec::Fixed(500));
        assert_eq!(fixed.resolved_shots(), 500);

        let auto = ExperimentConfig::from_json(r#"{"shots": "auto"}"#).unwrap();
        assert_eq!(auto.shots, ShotsSpec::Auto);

        let err = ExperimentConfig::from_json(r#"{"shots": "all"}"#).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn auto_shots_resolve_to_threshold_ceiling() {
        let config = ExperimentConfig::from_json(
            r#"{"train_size": 8, "lambda": 1.0, "delta": 0.1}"#,
        )
        .unwrap();
        // ceil(64 * ln(160)) = ceil(324.79...) = 325.
        assert_eq!(config.resolved_shots(), 325);
    }

    #[test]
    fn enum_fields_parse_snake_case() {
        let config = ExperimentConfig::from_json(
            r#"{
                "encoding": "angle_product",
                "swap_mode": "physical",
                "test_eval": "exact_row",
                "kernel_source": "closed_form_noisy"
            }"#,
        )
        .unwrap();
        assert_eq!(config.encoding, EncodingConfig::AngleProduct);
        assert_eq!(config.swap_mode, SwapModeConfig::Physical);
        assert_eq!(config.test_eval, TestEvalConfig::ExactRow);
        assert_eq!(config.kernel_source, KernelSourceConfig::ClosedFormNoisy);
    }

    #[test]
    fn validation_rejects_out_of_range_fields() {
        let cases = [
            r#"{"qubits": 0}"#,
            r#"{"qubits": 11}"#,
            r#"{"train_size": 0}"#,
            r#"{"test_size": 0}"#,
            r#"{"lambda": 0.0}"#,
            r#"{"lambda": -1.0}"#,
            r#"{"p": 1.0}"#,
            r#"{"p": -0.1}"#,
            r#"{"delta": 0.0}"#,
            r#"{"delta": 1.0}"#,
            r#"{"trials": 0}"#,
            r#"{"shots": 0}"#,
        ];
        for json in cases {
            let err = ExperimentConfig::from_json(json).unwrap_err();
            assert_eq!(err.exit_code(), 1, "expected config rejection for {json}");
        }
    }

    #[test]
    fn budget_guard_rejects_oversized_campaigns() {
        // N(N+1)/2 * m * trials = 528 * 1e8 * 1 = 5.28e10 > 1e10.
        let err = ExperimentConfig::from_json(
            r#"{"train_size": 32, "shots": 100000000, "trials": 1}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("budget"), "{err}");

        // Just inside: 528 * 100 * 20 = 1.056e6.
        ExperimentConfig::from_json(r#"{"train_size": 32, "shots": 100}"#)
            .expect("small campaign accepted");
    }

    #[test]
    fn config_round_trips_through_json() {
        let config = ExperimentConfig {
            shots: ShotsSpec::Fixed(123),
            ..ExperimentConfig::default()
        };
        let text = config.to_json_pretty();
        let back = ExperimentConfig::from_json(&text).unwrap();
        assert_eq!(back, config);

        let auto = ExperimentConfig::default();
        let back = ExperimentConfig::from_json(&auto.to_json_pretty()).unwrap();
        assert_eq!(back, auto);
    }
}
