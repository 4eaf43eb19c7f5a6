mod common;

use common::{random_density, random_ket, rng};
use fwlab_core::histories::ConsistencyConfig;
use fwlab_core::numerics::hermitian_eigendecomposition;
use fwlab_core::scenarios::{
    apply_channel, certify_perfect_channel, choi_distance_from_identity, flip_probabilities,
    random_channel, sample_flip_probabilities, teleport_analysis, Basis, QubitChannel,
    SpinFramework,
};
use fwlab_core::Tolerances;
use proptest::prelude::*;

/// Certification at `tol_cert` bounds the Choi distance by this multiple of it.
const CHOI_CONSTANT: f64 = 5.0;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn channels_map_states_to_states(seed in any::<u64>(), scale in 0.0f64..=1.0) {
        let tol = Tolerances::default();
        let ch = random_channel(seed, scale).unwrap();
        let rho = random_density(&mut rng(seed), 2, &tol);
        let out = apply_channel(&ch, &rho);
        prop_assert!((out.matrix().trace().re - 1.0).abs() <= 1e-12);
        prop_assert!(out.matrix().trace().im.abs() <= 1e-12);
        let eig = hermitian_eigendecomposition(out.matrix(), &tol).unwrap();
        prop_assert!(eig.values.iter().all(|&v| v >= -1e-12));
    }

    #[test]
    fn flips_are_probabilities(seed in any::<u64>(), scale in 0.0f64..=1.0) {
        let ch = random_channel(seed, scale).unwrap();
        for basis in [Basis::Z, Basis::X] {
            let f = flip_probabilities(&ch, basis);
            for p in [f.p_plus_to_minus, f.p_minus_to_plus] {
                prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p));
            }
        }
    }

    #[test]
    fn certification_is_sound(seed in any::<u64>(), exponent in 0.0f64..14.0) {
        let tol_cert = 1e-6;
        let ch = random_channel(seed, 10f64.powf(-exponent)).unwrap();
        if certify_perfect_channel(&ch, tol_cert).passed() {
            prop_assert!(choi_distance_from_identity(&ch) <= CHOI_CONSTANT * tol_cert);
        }
    }

    #[test]
    fn teleport_outcomes_do_not_depend_on_the_input(seed in any::<u64>(), x in any::<bool>()) {
        let tol = Tolerances::default();
        let input = random_ket(&mut rng(seed), 2);
        let framework = if x { SpinFramework::X } else { SpinFramework::Z };
        let report = teleport_analysis(&input, framework, &tol, &ConsistencyConfig::default()).unwrap();
        prop_assert!(report.consistency.consistent);
        for (p, m) in report.outcome_probs.iter().zip(report.conditional_match) {
            prop_assert!((p - 0.25).abs() <= 1e-12);
            prop_assert!((m - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>()) {
        let ch = random_channel(seed, 0.5).unwrap();
        let a = sample_flip_probabilities(&ch, Basis::X, 256, seed);
        let b = sample_flip_probabilities(&ch, Basis::X, 256, seed);
        prop_assert_eq!(a, b);
    }
}

#[test]
fn identity_passes_and_noise_fails() {
    assert!(certify_perfect_channel(&QubitChannel::identity(), 1e-9).passed());
    assert!(!certify_perfect_channel(&QubitChannel::depolarizing(1e-3).unwrap(), 1e-9).passed());
    assert!(!certify_perfect_channel(&QubitChannel::phase_flip(1e-3).unwrap(), 1e-9).passed());
    assert!(!certify_perfect_channel(&QubitChannel::bit_flip(1e-3).unwrap(), 1e-9).passed());
}
