//! Necessary distinguishability criteria for detector modes and Bell-basis
//! analysis of detection signatures.
//!
//! For a set of two-particle states to be reliably distinguishable by an
//! apparatus, the states remaining after one detection in any mode ĉ must be
//! mutually orthogonal: ⟨Ψ_k|ĉ†ĉ|Ψ_l⟩ = 0 for all k ≠ l. These are necessary
//! conditions only — they say nothing about assembling a full set of
//! detectors — but they are strong enough to rule entire families of
//! apparatuses out.
//!
//! Signatures are analyzed two ways: decomposition over the d² Bell states,
//! and a census by correlation class that counts joint-particle kets and
//! Bell coefficients per class. Both joint-particle kets and Bell states
//! group by correlation class, which keeps the census structure rigid: a
//! single joint ket in a class spreads over all d Bell states of that class,
//! while a single Bell state requires all d joint kets of its class.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{
    annihilate, bell_state, BellLabel, DetectorMode, Statistics, TwoParticleState,
    MODE_ZERO_THRESHOLD,
};
use crate::orbits::BellSet;

/// Magnitude above which a Bell coefficient counts as structurally nonzero.
/// Sits well above solver noise (~1e-10) and well below the smallest
/// structural coefficient (1/3 at d = 3).
pub const BELL_COEFF_TOLERANCE: f64 = 1e-6;

/// Inner product of the single-particle states remaining after one detection
/// in `mode`: ⟨Ψ_k|ĉ†ĉ|Ψ_l⟩ up to the fixed annihilation normalization.
pub fn gram_condition(
    k: BellLabel,
    l: BellLabel,
    mode: &DetectorMode,
    statistics: Statistics,
) -> Result<Complex64> {
    if k.d() != l.d() {
        return Err(Error::DimensionMismatch(k.d(), l.d()));
    }
    if mode.d() != k.d() {
        return Err(Error::DimensionMismatch(mode.d(), k.d()));
    }
    let rk = annihilate(mode, &bell_state(k, statistics))?;
    let rl = annihilate(mode, &bell_state(l, statistics))?;
    Ok(rk.dotc(&rl))
}

/// Coefficients β with sig = Σ β_{c,p} |Ψ_c^p⟩, in canonical (c-major) label
/// order. The signature must lie in the one-left/one-right sector.
pub fn bell_decompose(sig: &TwoParticleState) -> Result<Vec<Complex64>> {
    if !sig.in_cross_channel_sector(1e-12) {
        return Err(Error::OutsideSector);
    }
    BellLabel::all(sig.d())?
        .into_iter()
        .map(|l| bell_state(l, sig.statistics()).inner_product(sig))
        .collect()
}

/// Rebuilds a sector state from Bell coefficients in canonical label order.
pub fn bell_recompose(
    d: usize,
    statistics: Statistics,
    coeffs: &[Complex64],
) -> Result<TwoParticleState> {
    let labels = BellLabel::all(d)?;
    if coeffs.len() != labels.len() {
        return Err(Error::BadVectorLength {
            got: coeffs.len(),
            expected: labels.len(),
        });
    }
    let mut amp = nalgebra::DMatrix::zeros(2 * d, 2 * d);
    for (l, &b) in labels.iter().zip(coeffs) {
        amp += bell_state(*l, statistics).grid() * b;
    }
    TwoParticleState::from_grid(d, statistics, amp)
}

/// Census of one correlation class of a detection signature.
#[derive(Clone, Debug)]
pub struct ClassCensus {
    /// Joint-particle kets of this class with amplitude above the structural
    /// zero threshold.
    pub joint_ket_count: usize,
    /// Bell coefficients β_{c,p} for p = 0..d, this class's row of the
    /// decomposition.
    pub bell_coefficients: Vec<Complex64>,
}

impl ClassCensus {
    pub fn nonzero_bell_count(&self, tol: f64) -> usize {
        self.bell_coefficients.iter().filter(|b| b.norm() > tol).count()
    }
}

/// Per-correlation-class census of a detection signature.
#[derive(Clone, Debug)]
pub struct SignatureCensus {
    pub d: usize,
    /// Indexed by correlation class c.
    pub classes: Vec<ClassCensus>,
    /// Bell coefficients above [`BELL_COEFF_TOLERANCE`] over all classes.
    pub total_nonzero_bell: usize,
}

impl SignatureCensus {
    pub fn joint_ket_counts(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.joint_ket_count).collect()
    }
}

/// Separates a signature into correlation classes: the joint ket pairing
/// left value s with right value t belongs to class (t − s) mod d.
pub fn correlation_census(sig: &TwoParticleState) -> Result<SignatureCensus> {
    let d = sig.d();
    let beta = bell_decompose(sig)?;
    let mut classes = Vec::with_capacity(d);
    for c in 0..d {
        let mut joint_ket_count = 0;
        for s in 0..d {
            let t = (s + c) % d;
            if sig.joint_ket_amplitude(s, t).norm() > MODE_ZERO_THRESHOLD {
                joint_ket_count += 1;
            }
        }
        classes.push(ClassCensus {
            joint_ket_count,
            bell_coefficients: beta[c * d..(c + 1) * d].to_vec(),
        });
    }
    let total_nonzero_bell = beta
        .iter()
        .filter(|b| b.norm() > BELL_COEFF_TOLERANCE)
        .count();
    Ok(SignatureCensus {
        d,
        classes,
        total_nonzero_bell,
    })
}

/// True iff at least two members of `target` appear in the signature's Bell
/// decomposition with magnitude above `tol` — such a signature cannot tell
/// the target states apart.
pub fn signature_conflicts(sig: &TwoParticleState, target: &BellSet, tol: f64) -> Result<bool> {
    if sig.d() != target.d() {
        return Err(Error::DimensionMismatch(sig.d(), target.d()));
    }
    let beta = bell_decompose(sig)?;
    let hits = target
        .labels()
        .iter()
        .filter(|l| beta[l.flat_index()].norm() > tol)
        .count();
    Ok(hits >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{detection_signature, Channel, SingleParticleMode};
    use nalgebra::DVector;
    use rand::Rng;
    use rand::SeedableRng;

    fn c64(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn basis_mode(value: usize, channel: Channel, d: usize) -> DetectorMode {
        DetectorMode::basis(SingleParticleMode::new(value, channel, d).unwrap())
    }

    fn random_mode(d: usize, rng: &mut impl Rng) -> DetectorMode {
        let nu = DVector::from_fn(2 * d, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        DetectorMode::new(d, nu).unwrap().normalized()
    }

    #[test]
    fn gram_examples_at_d3() {
        let mode = basis_mode(0, Channel::Left, 3);
        // residuals (1/√3)|0,R⟩ vs (1/√3)|1,R⟩: orthogonal
        let g = gram_condition(
            BellLabel::new(3, 0, 0).unwrap(),
            BellLabel::new(3, 1, 0).unwrap(),
            &mode,
            Statistics::Boson,
        )
        .unwrap();
        assert!(g.norm() < 1e-14);

        // residuals both (1/√3)|0,R⟩: overlap 1/3
        let g = gram_condition(
            BellLabel::new(3, 0, 0).unwrap(),
            BellLabel::new(3, 0, 1).unwrap(),
            &mode,
            Statistics::Boson,
        )
        .unwrap();
        assert!((g - c64(1.0 / 3.0)).norm() < 1e-14);
    }

    #[test]
    fn gram_diagonal_is_nonnegative() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let mode = random_mode(3, &mut rng);
            let l = BellLabel::new(3, rng.random_range(0..3), rng.random_range(0..3)).unwrap();
            let g = gram_condition(l, l, &mode, Statistics::Boson).unwrap();
            assert!(g.im.abs() < 1e-12);
            assert!(g.re >= -1e-14);
        }
    }

    #[test]
    fn gram_is_hermitian_in_its_labels() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let mode = random_mode(3, &mut rng);
            let k = BellLabel::new(3, rng.random_range(0..3), rng.random_range(0..3)).unwrap();
            let l = BellLabel::new(3, rng.random_range(0..3), rng.random_range(0..3)).unwrap();
            for statistics in [Statistics::Boson, Statistics::Fermion] {
                let a = gram_condition(k, l, &mode, statistics).unwrap();
                let b = gram_condition(l, k, &mode, statistics).unwrap();
                assert!((a - b.conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn distinct_classes_with_basis_modes_give_zero_gram() {
        for d in [2usize, 3] {
            for index in 0..2 * d {
                let mode = DetectorMode::basis(SingleParticleMode::from_index(index, d).unwrap());
                for k in BellLabel::all(d).unwrap() {
                    for l in BellLabel::all(d).unwrap() {
                        if k.c() == l.c() {
                            continue;
                        }
                        let g = gram_condition(k, l, &mode, Statistics::Boson).unwrap();
                        assert!(g.norm() < 1e-14, "d={d} m={index} {k} {l}");
                    }
                }
            }
        }
    }

    #[test]
    fn decompose_symmetric_joint_ket() {
        // sym(|0,L⟩|0,R⟩) = (1/√3)(Ψ_0^0 + Ψ_0^1 + Ψ_0^2)
        let i = basis_mode(0, Channel::Left, 3);
        let j = basis_mode(0, Channel::Right, 3);
        let sig = detection_signature(&i, &j, Statistics::Boson).unwrap().unwrap();
        let beta = bell_decompose(&sig).unwrap();
        let want = 1.0 / 3.0_f64.sqrt();
        for (idx, b) in beta.iter().enumerate() {
            if idx < 3 {
                assert!((b - c64(want)).norm() < 1e-12, "idx {idx}");
            } else {
                assert!(b.norm() < 1e-12, "idx {idx}");
            }
        }
    }

    #[test]
    fn decompose_bell_state_is_unit_coefficient() {
        let sig = bell_state(BellLabel::new(3, 1, 1).unwrap(), Statistics::Boson);
        let beta = bell_decompose(&sig).unwrap();
        for (idx, b) in beta.iter().enumerate() {
            let want = if idx == 4 { 1.0 } else { 0.0 };
            assert!((b - c64(want)).norm() < 1e-12);
        }
    }

    #[test]
    fn decompose_rejects_out_of_sector_states() {
        let mut amp = nalgebra::DMatrix::zeros(6, 6);
        amp[(0, 2)] = c64(1.0 / 2.0_f64.sqrt());
        amp[(2, 0)] = c64(1.0 / 2.0_f64.sqrt());
        let state = TwoParticleState::from_grid(3, Statistics::Boson, amp).unwrap();
        assert_eq!(bell_decompose(&state), Err(Error::OutsideSector));
    }

    #[test]
    fn census_counts_for_named_signatures() {
        // sym(|0,L⟩|0,R⟩): one joint ket, class 0
        let sig = detection_signature(
            &basis_mode(0, Channel::Left, 3),
            &basis_mode(0, Channel::Right, 3),
            Statistics::Boson,
        )
        .unwrap()
        .unwrap();
        let census = correlation_census(&sig).unwrap();
        assert_eq!(census.joint_ket_counts(), vec![1, 0, 0]);
        assert_eq!(census.classes[0].nonzero_bell_count(BELL_COEFF_TOLERANCE), 3);

        // x|00⟩ + y|01⟩ + z|02⟩: one joint ket in each class
        let j = DetectorMode::from_kets(
            3,
            &[
                (0, Channel::Right, c64(0.6)),
                (1, Channel::Right, c64(0.48)),
                (2, Channel::Right, Complex64::new(0.0, 0.64)),
            ],
        )
        .unwrap();
        let sig = detection_signature(&basis_mode(0, Channel::Left, 3), &j, Statistics::Boson)
            .unwrap()
            .unwrap();
        let census = correlation_census(&sig).unwrap();
        assert_eq!(census.joint_ket_counts(), vec![1, 1, 1]);
        assert_eq!(census.total_nonzero_bell, 9);
    }

    #[test]
    fn census_of_paired_three_ket_modes() {
        // α|a,L⟩+β|b,L⟩+γ|c,R⟩ against δ|c,L⟩+ε|a,R⟩+η|b,R⟩ puts all three
        // joint kets in class 0 and one in each other class.
        let m1 = DetectorMode::from_kets(
            3,
            &[
                (0, Channel::Left, c64(0.6)),
                (1, Channel::Left, c64(0.5)),
                (2, Channel::Right, Complex64::new(0.1, 0.62)),
            ],
        )
        .unwrap();
        let m2 = DetectorMode::from_kets(
            3,
            &[
                (2, Channel::Left, c64(0.7)),
                (0, Channel::Right, Complex64::new(0.5, 0.2)),
                (1, Channel::Right, c64(0.47)),
            ],
        )
        .unwrap();
        let sig = detection_signature(&m1, &m2, Statistics::Boson).unwrap().unwrap();
        let census = correlation_census(&sig).unwrap();
        assert_eq!(census.joint_ket_counts(), vec![3, 1, 1]);
        assert!(census.total_nonzero_bell >= 7);
    }

    #[test]
    fn conflict_examples() {
        let target =
            BellSet::from_pairs(3, &[(0, 0), (0, 1), (1, 1), (2, 2)]).unwrap();

        let sig = detection_signature(
            &basis_mode(0, Channel::Left, 3),
            &basis_mode(0, Channel::Right, 3),
            Statistics::Boson,
        )
        .unwrap()
        .unwrap();
        assert!(signature_conflicts(&sig, &target, BELL_COEFF_TOLERANCE).unwrap());

        let bell_sig = bell_state(BellLabel::new(3, 1, 1).unwrap(), Statistics::Boson);
        assert!(!signature_conflicts(&bell_sig, &target, BELL_COEFF_TOLERANCE).unwrap());

        // a null projection produces no signature at all; by convention that
        // conflicts with nothing
        let i = basis_mode(0, Channel::Left, 3);
        let null = detection_signature(&i, &i, Statistics::Boson).unwrap();
        let conflict = null
            .map(|s| signature_conflicts(&s, &target, BELL_COEFF_TOLERANCE))
            .transpose()
            .unwrap()
            .unwrap_or(false);
        assert!(!conflict);
    }

    #[test]
    fn recompose_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for statistics in [Statistics::Boson, Statistics::Fermion] {
            for _ in 0..20 {
                let i = random_mode(3, &mut rng);
                let j = random_mode(3, &mut rng);
                let Some(sig) = detection_signature(&i, &j, statistics).unwrap() else {
                    continue;
                };
                let beta = bell_decompose(&sig).unwrap();
                let back = bell_recompose(3, statistics, &beta).unwrap();
                let diff = (sig.grid() - back.grid()).norm();
                assert!(diff < 1e-10, "round-trip error {diff}");
            }
        }
    }
}
