//! The operator-inequality chain behind the noisy guarantee: whenever the
//! concentration event holds, the inverse of the regularized estimate is
//! dominated by 2/(1-q) times the inverse of the regularized exact kernel.

use qkernel_core::bounds::m_threshold;
use qkernel_core::linalg::{min_eig, psd_shift_event, sandwich_inequality_check};
use qkernel_core::quantum::{
    effective_noise_q, encode, exact_kernel, noisy_kernel_closed_form, sample_input,
    FeatureMapKind, FeatureMapSpec,
};
use qkernel_core::rng::{derive_seed, stream_rng};
use qkernel_core::sampling::{estimate_kernel, SwapTestMode};

#[test]
fn sandwich_holds_on_every_qualifying_trial() {
    let n = 6;
    let lambda = 1.0;
    let delta = 0.1;
    let p = 0.3;
    let q = effective_noise_q(p).unwrap();
    let spec = FeatureMapSpec::new(2, FeatureMapKind::AngleEntangled).unwrap();

    let m = m_threshold(n, lambda, delta).unwrap().ceil() as u64;
    assert_eq!(m, 230);

    let trials = 500u64;
    let mut qualifying = 0u64;
    for t in 0..trials {
        let seed = derive_seed(707, &[t]);
        let mut rng = stream_rng(derive_seed(seed, &[0]));
        let inputs: Vec<Vec<f64>> = (0..n).map(|_| sample_input(&spec, &mut rng)).collect();
        let states: Vec<_> = inputs.iter().map(|x| encode(x, &spec).unwrap()).collect();
        let k = exact_kernel(&states).unwrap();
        let ktilde = noisy_kernel_closed_form(&k, p, spec.dim()).unwrap();
        let khat =
            estimate_kernel(&ktilde, m, SwapTestMode::Idealized, derive_seed(seed, &[1]))
                .unwrap();

        if psd_shift_event(khat.matrix(), &ktilde, lambda).unwrap() {
            qualifying += 1;
            assert!(
                sandwich_inequality_check(khat.matrix(), &k, lambda, q).unwrap(),
                "sandwich violated on qualifying trial {t}"
            );
            // The event licenses the SPD solve used by training.
            let shifted = khat.matrix().add_scaled_identity(lambda);
            assert!(min_eig(&shifted).unwrap() >= lambda / 2.0 - 2e-9);
        }
    }
    assert!(
        qualifying > 0,
        "no trial satisfied the event; nothing was checked"
    );
}
