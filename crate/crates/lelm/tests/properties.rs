//! Property suites over randomized states, modes, and operators.
//!
//! Coefficient magnitudes are drawn away from the structural-zero window so
//! that census counts and Bell-coefficient thresholds classify unambiguously;
//! sparsity patterns (exact zeros) are drawn separately.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

use lelm::detector::{bell_decompose, bell_recompose, correlation_census, BELL_COEFF_TOLERANCE};
use lelm::fock::{
    annihilate, bell_state, detection_signature, BellLabel, DetectorMode, Statistics,
    TwoParticleState,
};
use lelm::povm::{apply_first_click, apply_first_click_rank1, Rank1Kraus};

fn coeff() -> impl Strategy<Value = Complex64> {
    // magnitude in [0.2, 1.2), uniform phase
    (0.2f64..1.2, 0.0f64..std::f64::consts::TAU)
        .prop_map(|(r, t)| Complex64::new(r * t.cos(), r * t.sin()))
}

fn statistics() -> impl Strategy<Value = Statistics> {
    prop_oneof![Just(Statistics::Boson), Just(Statistics::Fermion)]
}

/// A qutrit detector mode with the given ket support pattern.
fn sparse_mode(mask: u8, coeffs: &[Complex64]) -> DetectorMode {
    let nu = DVector::from_fn(6, |m, _| {
        if mask >> m & 1 == 1 {
            coeffs[m]
        } else {
            Complex64::ZERO
        }
    });
    DetectorMode::new(3, nu).unwrap()
}

fn mode_strategy() -> impl Strategy<Value = DetectorMode> {
    (1u8..64, proptest::collection::vec(coeff(), 6))
        .prop_map(|(mask, coeffs)| sparse_mode(mask, &coeffs))
}

fn alpha_strategy(d: usize) -> impl Strategy<Value = DVector<Complex64>> {
    proptest::collection::vec(coeff(), 2 * d).prop_map(DVector::from_vec)
}

fn label_strategy(d: usize) -> impl Strategy<Value = BellLabel> {
    (0..d, 0..d).prop_map(move |(c, p)| BellLabel::new(d, c, p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Every constructed signature matches its statistics flag entrywise.
    #[test]
    fn signatures_respect_exchange_symmetry(
        i in mode_strategy(),
        j in mode_strategy(),
        statistics in statistics(),
    ) {
        if let Some(sig) = detection_signature(&i, &j, statistics).unwrap() {
            prop_assert!(sig.exchange_symmetry_error() < 1e-12);
            prop_assert!(sig.is_normalized());
        }
    }

    /// Census structure rules: a lone joint ket in a class spreads over all
    /// three Bell states of that class; total nonzero counts stay coherent.
    #[test]
    fn census_structure_rules(
        i in mode_strategy(),
        j in mode_strategy(),
    ) {
        let Some(sig) = detection_signature(&i, &j, Statistics::Boson).unwrap() else {
            return Ok(());
        };
        let census = correlation_census(&sig).unwrap();
        let mut expected_min = 0;
        for class in &census.classes {
            if class.joint_ket_count == 1 {
                prop_assert_eq!(class.nonzero_bell_count(BELL_COEFF_TOLERANCE), 3);
            }
            if class.joint_ket_count > 0 {
                expected_min += 1; // nonzero class content hits ≥ 1 Bell state
                prop_assert!(class.nonzero_bell_count(BELL_COEFF_TOLERANCE) >= 1);
            }
        }
        prop_assert!(census.total_nonzero_bell >= expected_min);
    }

    /// Rank-1 first clicks always factor; the canonical residual matches the
    /// α-probed map.
    #[test]
    fn rank1_clicks_always_separable(
        alpha in alpha_strategy(3),
        n in alpha_strategy(3),
        label in label_strategy(3),
        statistics in statistics(),
    ) {
        let kraus = Rank1Kraus::new(3, alpha, n).unwrap();
        let out = apply_first_click_rank1(&kraus, label, statistics).unwrap();
        prop_assert!(out.is_separable());
    }
}

proptest! {
    /// A Bell state used as its own signature has exactly one nonzero
    /// coefficient: the full-class / proportional case of the census rules.
    #[test]
    fn census_of_pure_bell_state(label in label_strategy(3), statistics in statistics()) {
        let census = correlation_census(&bell_state(label, statistics)).unwrap();
        prop_assert_eq!(census.classes[label.c()].joint_ket_count, 3);
        prop_assert_eq!(
            census.classes[label.c()].nonzero_bell_count(BELL_COEFF_TOLERANCE),
            1
        );
        prop_assert_eq!(census.total_nonzero_bell, 1);
    }

    /// The detection operator is linear in the mode and in the state.
    #[test]
    fn annihilate_is_bilinear(
        m1 in mode_strategy(),
        m2 in mode_strategy(),
        a in coeff(),
        b in coeff(),
        l1 in label_strategy(3),
        l2 in label_strategy(3),
        statistics in statistics(),
    ) {
        let state = bell_state(l1, statistics);
        let combined = DetectorMode::new(3, m1.nu() * a + m2.nu() * b).unwrap();
        let lhs = annihilate(&combined, &state).unwrap();
        let rhs = annihilate(&m1, &state).unwrap() * a + annihilate(&m2, &state).unwrap() * b;
        prop_assert!((lhs - rhs).norm() < 1e-12);

        let s1 = bell_state(l1, statistics);
        let s2 = bell_state(l2, statistics);
        let mixed = TwoParticleState::from_grid(
            3,
            statistics,
            s1.grid() * a + s2.grid() * b,
        ).unwrap();
        let lhs = annihilate(&m1, &mixed).unwrap();
        let rhs = annihilate(&m1, &s1).unwrap() * a + annihilate(&m1, &s2).unwrap() * b;
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    /// Bell decomposition followed by recomposition is the identity on the
    /// one-left/one-right sector.
    #[test]
    fn decompose_recompose_round_trip(
        i in mode_strategy(),
        j in mode_strategy(),
        statistics in statistics(),
    ) {
        let Some(sig) = detection_signature(&i, &j, statistics).unwrap() else {
            return Ok(());
        };
        let beta = bell_decompose(&sig).unwrap();
        let back = bell_recompose(3, statistics, &beta).unwrap();
        prop_assert!((sig.grid() - back.grid()).norm() < 1e-10);
    }

    /// Swapping the two detectors reproduces the signature exactly for
    /// bosons and up to a global −1 for fermions.
    #[test]
    fn signature_swap_symmetry(i in mode_strategy(), j in mode_strategy()) {
        let boson = detection_signature(&i, &j, Statistics::Boson).unwrap();
        if let (Some(ab), Some(ba)) = (
            boson,
            detection_signature(&j, &i, Statistics::Boson).unwrap(),
        ) {
            prop_assert!((ab.grid() - ba.grid()).norm() < 1e-12);
        }
        let fermion = detection_signature(&i, &j, Statistics::Fermion).unwrap();
        if let (Some(ab), Some(ba)) = (
            fermion,
            detection_signature(&j, &i, Statistics::Fermion).unwrap(),
        ) {
            prop_assert!((ab.grid() + ba.grid()).norm() < 1e-12);
        }
    }

    /// Generic rank-2 operators leave the Bell grid entangled.
    #[test]
    fn rank2_clicks_stay_entangled(
        a1 in alpha_strategy(3),
        n1 in alpha_strategy(3),
        a2 in alpha_strategy(3),
        n2 in alpha_strategy(3),
        label in label_strategy(3),
    ) {
        let kraus = Rank1Kraus::new(3, a1, n1).unwrap().matrix()
            + Rank1Kraus::new(3, a2, n2).unwrap().matrix();
        let out = apply_first_click(&kraus, label, Statistics::Boson).unwrap();
        prop_assert!(!out.is_separable());
    }

    /// Sector states reconstruct from Bell coefficients for d = 2 as well.
    #[test]
    fn qubit_sector_round_trip(
        coeffs in proptest::collection::vec(coeff(), 4),
        statistics in statistics(),
    ) {
        let sig = bell_recompose(2, statistics, &coeffs).unwrap();
        let beta = bell_decompose(&sig).unwrap();
        let back = bell_recompose(2, statistics, &beta).unwrap();
        prop_assert!((sig.grid() - back.grid()).norm() < 1e-10);
    }
}

#[test]
fn full_rank_operators_break_separability_in_sampled_draws() {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
    let labels = BellLabel::all(3).unwrap();
    for _ in 0..1000 {
        let kraus = DMatrix::from_fn(6, 6, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let label = labels[rng.random_range(0..9)];
        let out = apply_first_click(&kraus, label, Statistics::Boson).unwrap();
        assert!(!out.is_separable());
    }
}
