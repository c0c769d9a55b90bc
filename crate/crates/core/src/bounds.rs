//! Generalization-bound calculators: the shot-count threshold, the matrix
//! concentration failure bound, and the right-hand sides of the three
//! guarantee variants, with hidden constants set to one and every term
//! reported separately so empirical comparisons can be made as ratios.

// In test builds std is linked and the inherent f64 methods shadow these.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::linalg::{min_eig, solve_spd, KernelMatrix, PSD_TOL};
use crate::{Error, Result};

/// Which guarantee the report's terms instantiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundVariant {
    /// Two quadratic-form terms (regularizer-weighted and kernel-sandwiched)
    /// plus the confidence term.
    Theorem1,
    /// Consolidated single quadratic-form term with lambda' = max{1, lambda}.
    Remark1,
    /// The consolidated form for the noisy pipeline, inflated by 1/(1-p).
    Theorem2,
}

/// Right-hand-side terms of one bound instance; total is their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub variant: BoundVariant,
    /// sqrt(lambda^2 y^T (W+lambda I)^{-2} y / N) for Theorem1;
    /// sqrt(lambda' y^T (W+lambda I)^{-1} y / N) for Remark1, additionally
    /// divided by (1-p) for Theorem2.
    pub term_regularizer: f64,
    /// sqrt(y^T (W+lambda I)^{-1} W (W+lambda I)^{-1} y / N); Theorem1 only.
    pub term_kernel: Option<f64>,
    /// sqrt(log(1/delta) / N).
    pub term_confidence: f64,
    pub total: f64,
}

fn check_delta(delta: f64) -> Result<()> {
    if !delta.is_finite() || delta <= 0.0 || delta >= 1.0 {
        return Err(Error::InvalidConfidence { delta });
    }
    Ok(())
}

fn check_psd(w: &KernelMatrix) -> Result<()> {
    let me = min_eig(w)?;
    if me < -PSD_TOL {
        return Err(Error::NotPositiveSemidefinite { min_eig: me });
    }
    Ok(())
}

fn check_labels(y: &[f64], w: &KernelMatrix) -> Result<()> {
    if y.len() != w.size() {
        return Err(Error::DimensionMismatch {
            expected: w.size(),
            found: y.len(),
        });
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteEntries);
    }
    Ok(())
}

fn confidence_term(delta: f64, n: usize) -> f64 {
    ((1.0 / delta).ln() / n as f64).sqrt()
}

/// Minimum shot count for the concentration guarantee:
/// 8 N log(2N/delta) / lambda^2 (natural log).
pub fn m_threshold(n: usize, lambda: f64, delta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidRegularization { lambda });
    }
    check_delta(delta)?;
    let nf = n as f64;
    Ok(8.0 * nf * (2.0 * nf / delta).ln() / (lambda * lambda))
}

/// Probability bound N exp(-lambda^2 m / 8N) on the concentration event
/// failing after m shots per entry.
///
/// Returned unclamped: values above one are vacuous but preserved so the
/// threshold inversion and the m = 0 endpoint stay exact. Accepts any real
/// m >= 0 so thresholds can be fed back in without rounding.
pub fn hoeffding_failure_bound(n: usize, lambda: f64, m: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidRegularization { lambda });
    }
    if !m.is_finite() || m < 0.0 {
        return Err(Error::ZeroShots);
    }
    let nf = n as f64;
    Ok(nf * (-lambda * lambda * m / (8.0 * nf)).exp())
}

/// Two-term bound: regularizer and kernel quadratic forms plus confidence.
///
/// Accepts lambda = 0 when W itself is positive definite.
pub fn theorem1_rhs(
    y: &[f64],
    w: &KernelMatrix,
    lambda: f64,
    delta: f64,
) -> Result<BoundReport> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidRegularization { lambda });
    }
    check_delta(delta)?;
    check_psd(w)?;
    check_labels(y, w)?;
    let n = w.size();
    let reg = w.add_scaled_identity(lambda);
    let z = solve_spd(&reg, y)?;
    let z_norm_sq: f64 = z.iter().map(|v| v * v).sum();
    let wz = w.mat_vec(&z)?;
    let zwz: f64 = z.iter().zip(&wz).map(|(a, b)| a * b).sum();
    let nf = n as f64;
    let term_regularizer = (lambda * lambda * z_norm_sq / nf).sqrt();
    let term_kernel = (zwz.max(0.0) / nf).sqrt();
    let term_confidence = confidence_term(delta, n);
    Ok(BoundReport {
        variant: BoundVariant::Theorem1,
        term_regularizer,
        term_kernel: Some(term_kernel),
        term_confidence,
        total: term_regularizer + term_kernel + term_confidence,
    })
}

fn consolidated_regularizer_term(
    y: &[f64],
    w: &KernelMatrix,
    lambda: f64,
) -> Result<f64> {
    let reg = w.add_scaled_identity(lambda);
    let quad = crate::linalg::quad_form_inv(y, &reg)?;
    let lambda_prime = lambda.max(1.0);
    Ok((lambda_prime * quad / w.size() as f64).sqrt())
}

/// Consolidated bound: sqrt(lambda' y^T (W+lambda I)^{-1} y / N) plus
/// confidence, lambda' = max{1, lambda}.
pub fn remark1_rhs(
    y: &[f64],
    w: &KernelMatrix,
    lambda: f64,
    delta: f64,
) -> Result<BoundReport> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidRegularization { lambda });
    }
    check_delta(delta)?;
    check_psd(w)?;
    check_labels(y, w)?;
    let term_regularizer = consolidated_regularizer_term(y, w, lambda)?;
    let term_confidence = confidence_term(delta, w.size());
    Ok(BoundReport {
        variant: BoundVariant::Remark1,
        term_regularizer,
        term_kernel: None,
        term_confidence,
        total: term_regularizer + term_confidence,
    })
}

/// Noisy-pipeline bound: the consolidated term on the exact kernel divided
/// by (1-p), plus confidence.
///
/// Computed as the p = 0 value divided by (1-p), so the noise scaling is
/// exact by construction: at p = 0 this equals remark1_rhs bit for bit.
pub fn theorem2_rhs(
    y: &[f64],
    k: &KernelMatrix,
    lambda: f64,
    p: f64,
    delta: f64,
) -> Result<BoundReport> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidRegularization { lambda });
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidNoise { p });
    }
    check_delta(delta)?;
    check_psd(k)?;
    check_labels(y, k)?;
    let base = consolidated_regularizer_term(y, k, lambda)?;
    let term_regularizer = base / (1.0 - p);
    let term_confidence = confidence_term(delta, k.size());
    Ok(BoundReport {
        variant: BoundVariant::Theorem2,
        term_regularizer,
        term_kernel: None,
        term_confidence,
        total: term_regularizer + term_confidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spd_inverse;
    use crate::rng::{standard_normal_pair, stream_rng};
    use alloc::vec::Vec;
    use rand_chacha::ChaCha8Rng;

    fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> KernelMatrix {
        let g: Vec<f64> = (0..n * n).map(|_| standard_normal_pair(rng).0).collect();
        KernelMatrix::from_fn(n, |i, j| {
            let mut acc = 0.0;
            for k in 0..n {
                acc += g[i * n + k] * g[j * n + k];
            }
            acc / n as f64
        })
        .unwrap()
    }

    fn random_vec(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..n).map(|_| standard_normal_pair(rng).0).collect()
    }

    #[test]
    fn threshold_constructed_to_cancel() {
        // N = 1, lambda = sqrt(8), delta = 2/e: 8 log(e) / 8 = 1.
        let m = m_threshold(1, (8.0f64).sqrt(), 2.0 / core::f64::consts::E).unwrap();
        assert!((m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn threshold_against_high_precision_oracle() {
        // 80000 log(20000), evaluated with 60-digit arithmetic externally.
        let m = m_threshold(100, 0.1, 0.01).unwrap();
        assert!((m - 792279.0042028902).abs() < 1e-6);
    }

    #[test]
    fn threshold_grows_superlinearly_in_n() {
        let a = m_threshold(50, 0.5, 0.05).unwrap();
        let b = m_threshold(100, 0.5, 0.05).unwrap();
        assert!(b > 2.0 * a);
    }

    #[test]
    fn threshold_rejects_bad_inputs() {
        assert!(matches!(
            m_threshold(0, 1.0, 0.1),
            Err(Error::EmptyDimension)
        ));
        assert!(matches!(
            m_threshold(4, 0.0, 0.1),
            Err(Error::InvalidRegularization { .. })
        ));
        assert!(matches!(
            m_threshold(4, 1.0, 1.0),
            Err(Error::InvalidConfidence { .. })
        ));
    }

    #[test]
    fn failure_bound_endpoints() {
        assert_eq!(hoeffding_failure_bound(8, 1.0, 0.0).unwrap(), 8.0);
        let v = hoeffding_failure_bound(8, 1.0, 64.0 * (160.0f64).ln()).unwrap();
        assert!((v - 0.05).abs() < 1e-12);
    }

    #[test]
    fn failure_bound_inverts_threshold() {
        for n in [4usize, 8, 100] {
            for lambda in [0.1, 1.0, 3.0] {
                for delta in [0.01, 0.1, 0.5] {
                    let m = m_threshold(n, lambda, delta).unwrap();
                    let fb = hoeffding_failure_bound(n, lambda, m).unwrap();
                    let want = delta / 2.0;
                    assert!(
                        (fb - want).abs() <= 1e-12 * want,
                        "n={n} lambda={lambda} delta={delta}: {fb} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn theorem1_identity_kernel_at_zero_lambda() {
        // W = I, lambda = 0, unit y: terms (0, 1/sqrt(N), conf).
        let w = KernelMatrix::identity(4);
        let y = [0.5, 0.5, 0.5, 0.5];
        let r = theorem1_rhs(&y, &w, 0.0, 0.1).unwrap();
        assert_eq!(r.term_regularizer, 0.0);
        assert!((r.term_kernel.unwrap() - 0.5).abs() < 1e-12);
        assert!((r.term_confidence - (10.0f64.ln() / 4.0).sqrt()).abs() < 1e-12);
        assert!((r.total - (r.term_regularizer + r.term_kernel.unwrap() + r.term_confidence))
            .abs()
            < 1e-15);
    }

    #[test]
    fn theorem1_zero_labels() {
        let mut rng = stream_rng(40);
        let w = random_psd(5, &mut rng);
        let r = theorem1_rhs(&[0.0; 5], &w, 0.5, 0.1).unwrap();
        assert_eq!(r.term_regularizer, 0.0);
        assert_eq!(r.term_kernel.unwrap(), 0.0);
    }

    #[test]
    fn theorem1_matches_explicit_inverse_oracle() {
        let mut rng = stream_rng(41);
        for _ in 0..10 {
            let w = random_psd(5, &mut rng);
            let y = random_vec(5, &mut rng);
            let lambda = 0.8;
            let r = theorem1_rhs(&y, &w, lambda, 0.05).unwrap();

            let inv = spd_inverse(&w.add_scaled_identity(lambda)).unwrap();
            let z = inv.mat_vec(&y).unwrap();
            let z_sq: f64 = z.iter().map(|v| v * v).sum();
            let wz = w.mat_vec(&z).unwrap();
            let zwz: f64 = z.iter().zip(&wz).map(|(a, b)| a * b).sum();
            let want_reg = (lambda * lambda * z_sq / 5.0).sqrt();
            let want_ker = (zwz / 5.0).sqrt();
            assert!((r.term_regularizer - want_reg).abs() < 1e-8);
            assert!((r.term_kernel.unwrap() - want_ker).abs() < 1e-8);
        }
    }

    #[test]
    fn remark1_identity_kernel() {
        // W = I, lambda = 1, unit y: sqrt(1 * (1/2) / N).
        let n = 6;
        let w = KernelMatrix::identity(n);
        let y: Vec<f64> = (0..n).map(|_| 1.0 / (n as f64).sqrt()).collect();
        let r = remark1_rhs(&y, &w, 1.0, 0.1).unwrap();
        assert!((r.term_regularizer - (0.5 / n as f64).sqrt()).abs() < 1e-12);
        assert_eq!(r.term_kernel, None);
    }

    #[test]
    fn remark1_matches_direct_formula() {
        let mut rng = stream_rng(42);
        for lambda in [0.5, 2.0] {
            let w = random_psd(6, &mut rng);
            let y = random_vec(6, &mut rng);
            let r = remark1_rhs(&y, &w, lambda, 0.1).unwrap();
            let quad =
                crate::linalg::quad_form_inv(&y, &w.add_scaled_identity(lambda)).unwrap();
            let want = (lambda.max(1.0) * quad / 6.0).sqrt();
            assert!((r.term_regularizer - want).abs() < 1e-10);
        }
    }

    #[test]
    fn theorem2_reduces_to_remark1_at_zero_noise() {
        let mut rng = stream_rng(43);
        let k = random_psd(5, &mut rng);
        let y = random_vec(5, &mut rng);
        let r1 = remark1_rhs(&y, &k, 0.7, 0.05).unwrap();
        let r2 = theorem2_rhs(&y, &k, 0.7, 0.0, 0.05).unwrap();
        assert_eq!(r1.term_regularizer.to_bits(), r2.term_regularizer.to_bits());
        assert_eq!(r1.term_confidence.to_bits(), r2.term_confidence.to_bits());
        assert_eq!(r1.total.to_bits(), r2.total.to_bits());
    }

    #[test]
    fn theorem2_doubles_at_half_noise() {
        let mut rng = stream_rng(44);
        let k = random_psd(4, &mut rng);
        let y = random_vec(4, &mut rng);
        let base = theorem2_rhs(&y, &k, 1.0, 0.0, 0.1).unwrap();
        let half = theorem2_rhs(&y, &k, 1.0, 0.5, 0.1).unwrap();
        assert_eq!(
            half.term_regularizer.to_bits(),
            (2.0 * base.term_regularizer).to_bits()
        );
    }

    #[test]
    fn theorem2_scaling_exact_and_monotone() {
        let mut rng = stream_rng(45);
        let k = random_psd(5, &mut rng);
        let y = random_vec(5, &mut rng);
        let base = theorem2_rhs(&y, &k, 0.5, 0.0, 0.1).unwrap();
        let mut prev = 0.0;
        for p in [0.0, 0.1, 0.3, 0.5, 0.9] {
            let r = theorem2_rhs(&y, &k, 0.5, p, 0.1).unwrap();
            assert_eq!(
                r.term_regularizer.to_bits(),
                (base.term_regularizer / (1.0 - p)).to_bits()
            );
            assert!(r.term_regularizer >= prev);
            prev = r.term_regularizer;
        }
    }

    #[test]
    fn theorem2_matches_explicit_inverse_oracle() {
        let mut rng = stream_rng(46);
        let k = random_psd(5, &mut rng);
        let y = random_vec(5, &mut rng);
        let (lambda, p) = (2.0, 0.3);
        let r = theorem2_rhs(&y, &k, lambda, p, 0.1).unwrap();
        let inv = spd_inverse(&k.add_scaled_identity(lambda)).unwrap();
        let iy = inv.mat_vec(&y).unwrap();
        let quad: f64 = y.iter().zip(&iy).map(|(a, b)| a * b).sum();
        let want = (lambda.max(1.0) * quad / ((1.0 - p) * (1.0 - p) * 5.0)).sqrt();
        assert!((r.term_regularizer - want).abs() < 1e-10);
    }

    #[test]
    fn consolidation_dominates_split_terms() {
        // theorem1 regularizer + kernel terms <= 2 * remark1 regularizer.
        let mut rng = stream_rng(47);
        for _ in 0..50 {
            let w = random_psd(6, &mut rng);
            let y = random_vec(6, &mut rng);
            for lambda in [0.01, 0.5, 1.0, 3.0, 10.0] {
                let t1 = theorem1_rhs(&y, &w, lambda, 0.1).unwrap();
                let r1 = remark1_rhs(&y, &w, lambda, 0.1).unwrap();
                let split = t1.term_regularizer + t1.term_kernel.unwrap();
                assert!(
                    split <= 2.0 * r1.term_regularizer + 1e-12,
                    "lambda={lambda}: {split} vs {}",
                    2.0 * r1.term_regularizer
                );
            }
        }
    }

    #[test]
    fn theorem1_rejects_singular_at_zero_lambda() {
        let w = KernelMatrix::zeros(3);
        assert!(matches!(
            theorem1_rhs(&[0.1; 3], &w, 0.0, 0.1),
            Err(Error::NotPositiveDefinite)
        ));
    }
}
