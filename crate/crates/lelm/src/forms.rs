//! Sesquilinear forms behind the orthogonality criteria, and the small exact
//! algebra used to mechanize the analytic no-go chains.
//!
//! Every single-detector criterion is a form x†Qx in an unknown coefficient
//! vector x — a detector mode ν or a Kraus column pattern α. The matrices Q
//! are built by probing the defining operations on basis vectors, so they
//! stay tied to the same code paths the numerical searches exercise. The
//! no-go verifiers then manipulate the matrices with three reusable,
//! mechanically checked steps:
//!
//! - *linear extraction*: a family of computed forms equals a weighted
//!   combination of sparse two-term "pair forms" with an invertible weight
//!   matrix, so vanishing of the computed forms forces each pair form to
//!   vanish;
//! - *real implications*: a diagonal form constrains real nonnegative
//!   grouped moduli through a linear system whose null space is computed
//!   outright;
//! - *monomial products*: two-term relations are multiplied at exponent
//!   level to expose sign contradictions of the shape |x|² = −|y|².

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{annihilate, bell_state, root_of_unity, BellLabel, DetectorMode, Statistics};

/// x†Qx.
pub fn evaluate_form(q: &DMatrix<Complex64>, x: &DVector<Complex64>) -> Complex64 {
    x.dotc(&(q * x))
}

/// Linear map ν ↦ (remaining state after one detection in ν) for a fixed
/// Bell state, assembled by probing [`annihilate`] on the 2d basis modes.
pub fn annihilation_residual_map(
    label: BellLabel,
    statistics: Statistics,
) -> Result<DMatrix<Complex64>> {
    let d = label.d();
    let state = bell_state(label, statistics);
    let mut map = DMatrix::zeros(2 * d, 2 * d);
    for m in 0..2 * d {
        let basis = DetectorMode::new(d, DVector::from_fn(2 * d, |i, _| {
            if i == m {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::ZERO
            }
        }))?;
        map.set_column(m, &annihilate(&basis, &state)?);
    }
    Ok(map)
}

/// Q with ν†Qν = ⟨ĉΨ_k | ĉΨ_l⟩ for ĉ built from ν.
pub fn annihilation_form(
    k: BellLabel,
    l: BellLabel,
    statistics: Statistics,
) -> Result<DMatrix<Complex64>> {
    if k.d() != l.d() {
        return Err(Error::DimensionMismatch(k.d(), l.d()));
    }
    let mk = annihilation_residual_map(k, statistics)?;
    let ml = annihilation_residual_map(l, statistics)?;
    Ok(mk.adjoint() * ml)
}

/// Linear map α ↦ (second-particle residual after a rank-1 first click) for
/// a fixed Bell state, assembled by probing the first-click operation on
/// basis column patterns.
pub fn first_click_residual_map(
    label: BellLabel,
    statistics: Statistics,
) -> Result<DMatrix<Complex64>> {
    let d = label.d();
    let mut map = DMatrix::zeros(2 * d, 2 * d);
    for m in 0..2 * d {
        let alpha = DVector::from_fn(2 * d, |i, _| {
            if i == m {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::ZERO
            }
        });
        map.set_column(m, &crate::povm::first_click_particle2(&alpha, label, statistics)?);
    }
    Ok(map)
}

/// Q with α†Qα = ⟨residual_k | residual_l⟩ for the second-particle states
/// left behind by a rank-1 first click with column pattern α.
pub fn first_click_form(
    k: BellLabel,
    l: BellLabel,
    statistics: Statistics,
) -> Result<DMatrix<Complex64>> {
    if k.d() != l.d() {
        return Err(Error::DimensionMismatch(k.d(), l.d()));
    }
    let mk = first_click_residual_map(k, statistics)?;
    let ml = first_click_residual_map(l, statistics)?;
    Ok(mk.adjoint() * ml)
}

/// A product of variables x_i and conjugates conj(x_i) with an integer sign,
/// tracked at exponent level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    sign: i64,
    plain: Vec<u32>,
    conj: Vec<u32>,
}

impl Monomial {
    /// conj(x_a)·x_b over n variables.
    pub fn conj_times_plain(n: usize, a: usize, b: usize) -> Self {
        let mut m = Self {
            sign: 1,
            plain: vec![0; n],
            conj: vec![0; n],
        };
        m.conj[a] += 1;
        m.plain[b] += 1;
        m
    }

    pub fn negated(mut self) -> Self {
        self.sign = -self.sign;
        self
    }

    pub fn product<'a>(factors: impl IntoIterator<Item = &'a Monomial>) -> Option<Self> {
        let mut iter = factors.into_iter();
        let first = iter.next()?;
        let mut out = first.clone();
        for f in iter {
            out.sign *= f.sign;
            for (o, x) in out.plain.iter_mut().zip(&f.plain) {
                *o += x;
            }
            for (o, x) in out.conj.iter_mut().zip(&f.conj) {
                *o += x;
            }
        }
        Some(out)
    }

    pub fn sign(&self) -> i64 {
        self.sign
    }

    /// True when the monomial is ±|x_{v₁}·x_{v₂}·…|²: each listed variable
    /// appears exactly once plain and once conjugated, and no other variable
    /// appears at all.
    pub fn is_modulus_squared_over(&self, vars: &[usize]) -> bool {
        self.plain.iter().zip(&self.conj).enumerate().all(|(i, (&p, &c))| {
            if vars.contains(&i) {
                p == 1 && c == 1
            } else {
                p == 0 && c == 0
            }
        })
    }
}

/// The two-term form conj(x_{a})·x_{b} + conj(x_{c})·x_{d}, the shape of the
/// pair-sum relations the no-go chains extract. Index pairs are stored as
/// (conjugated, plain).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PairSumForm {
    pub first: (usize, usize),
    pub second: (usize, usize),
}

impl PairSumForm {
    pub fn matrix(&self, n: usize) -> DMatrix<Complex64> {
        let mut q = DMatrix::zeros(n, n);
        q[self.first] = Complex64::new(1.0, 0.0);
        q[self.second] = Complex64::new(1.0, 0.0);
        q
    }

    /// The relation "first term = −second term" that follows from the form
    /// vanishing, as a pair of monomials over n variables.
    pub fn relation(&self, n: usize) -> (Monomial, Monomial) {
        let lhs = Monomial::conj_times_plain(n, self.first.0, self.first.1);
        let rhs = Monomial::conj_times_plain(n, self.second.0, self.second.1).negated();
        (lhs, rhs)
    }
}

/// The three cyclic pair-sum forms over the six qutrit coefficients
/// (interleaved basis order |0,L⟩,|0,R⟩,…). These appear verbatim in both
/// the all-six-ket detector criteria and the cross-class first-click
/// criteria, with different overall scales.
pub fn cyclic_pair_forms() -> [PairSumForm; 3] {
    [
        PairSumForm {
            first: (0, 4),
            second: (1, 3),
        },
        PairSumForm {
            first: (2, 0),
            second: (3, 5),
        },
        PairSumForm {
            first: (4, 2),
            second: (5, 1),
        },
    ]
}

/// Weight matrix W[p][t] = e^{−2πi·pt/d}.
pub fn inverse_fourier_weights(d: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(d, d, |p, t| root_of_unity(d, -((p * t) as i64)))
}

/// |det W| computed by LU; nonzero determinant certifies that vanishing of
/// the weighted combinations forces vanishing of each combined term.
pub fn weight_determinant_magnitude(w: &DMatrix<Complex64>) -> f64 {
    w.clone().lu().determinant().norm()
}

/// Verifies computed[p] = s·Σ_t W[p][t]·pairs[t] entrywise for one shared
/// real positive scale s, returning s.
pub fn verify_weighted_extraction(
    computed: &[DMatrix<Complex64>],
    pairs: &[DMatrix<Complex64>],
    weights: &DMatrix<Complex64>,
    tol: f64,
) -> Result<f64> {
    let n = computed[0].nrows();
    let targets: Vec<DMatrix<Complex64>> = (0..computed.len())
        .map(|p| {
            let mut t = DMatrix::zeros(n, n);
            for (j, pair) in pairs.iter().enumerate() {
                t += pair * weights[(p, j)];
            }
            t
        })
        .collect();
    // least-squares scale over all entries simultaneously
    let mut num = Complex64::ZERO;
    let mut den = 0.0;
    for (c, t) in computed.iter().zip(&targets) {
        for (a, b) in c.iter().zip(t.iter()) {
            num += b.conj() * a;
            den += b.norm_sqr();
        }
    }
    if den < tol {
        return Err(Error::VerificationFailed("weighted extraction: degenerate target".into()));
    }
    let s = num / den;
    if s.im.abs() > tol || s.re <= 0.0 {
        return Err(Error::VerificationFailed(format!(
            "weighted extraction: scale {s} is not real positive"
        )));
    }
    for (p, (c, t)) in computed.iter().zip(&targets).enumerate() {
        let err = (c - t * s).norm();
        if err > tol {
            return Err(Error::VerificationFailed(format!(
                "weighted extraction: row {p} residual {err:.3e}"
            )));
        }
    }
    Ok(s.re)
}

/// Orthonormal basis of the null space of the real system with the given
/// rows, read off the eigendecomposition of AᵀA.
pub fn real_nullspace(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = rows.len();
    let n = rows[0].len();
    let a = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
    let gram = a.transpose() * &a;
    let eig = gram.symmetric_eigen();
    let scale = eig.eigenvalues.iter().cloned().fold(1.0_f64, f64::max);
    let tol = 1e-10 * scale;
    let mut basis = Vec::new();
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() <= tol {
            basis.push(eig.eigenvectors.column(i).iter().copied().collect());
        }
    }
    basis
}

/// Orthonormal basis of the null space of a complex matrix, read off the
/// eigendecomposition of M†M.
pub fn complex_nullspace(m: &DMatrix<Complex64>) -> Vec<DVector<Complex64>> {
    let gram = m.adjoint() * m;
    let eig = gram.symmetric_eigen();
    let scale = eig.eigenvalues.iter().cloned().fold(1.0_f64, f64::max);
    let tol = 1e-10 * scale;
    let mut basis = Vec::new();
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() <= tol {
            basis.push(DVector::from_column_slice(eig.eigenvectors.column(i).as_slice()));
        }
    }
    basis
}

/// True when the functional is orthogonal to every null-space basis vector,
/// i.e. lies in the row space of the system and therefore vanishes on every
/// solution.
pub fn functional_vanishes_on_solutions(
    nullspace: &[Vec<f64>],
    functional: &[f64],
    tol: f64,
) -> bool {
    nullspace.iter().all(|b| {
        b.iter()
            .zip(functional)
            .map(|(x, y)| x * y)
            .sum::<f64>()
            .abs()
            < tol
    })
}

/// Least-squares coefficients expressing `target` in the complex span of
/// `basis` (as vectorized matrices); returns (coefficients, residual norm).
pub fn express_in_span(
    basis: &[DMatrix<Complex64>],
    target: &DMatrix<Complex64>,
) -> (Vec<Complex64>, f64) {
    let n2 = target.nrows() * target.ncols();
    let a = DMatrix::from_fn(n2, basis.len(), |i, j| basis[j][(i % target.nrows(), i / target.nrows())]);
    let b = DVector::from_fn(n2, |i, _| target[(i % target.nrows(), i / target.nrows())]);
    let svd = a.clone().svd(true, true);
    let coeffs = svd.solve(&b, 1e-12).expect("svd solve");
    let residual = (&a * &coeffs - &b).norm();
    (coeffs.iter().copied().collect(), residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    fn random_vector(n: usize, rng: &mut impl Rng) -> DVector<Complex64> {
        DVector::from_fn(n, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    #[test]
    fn annihilation_form_matches_direct_gram() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for statistics in [Statistics::Boson, Statistics::Fermion] {
            for _ in 0..20 {
                let k = BellLabel::new(3, rng.random_range(0..3), rng.random_range(0..3)).unwrap();
                let l = BellLabel::new(3, rng.random_range(0..3), rng.random_range(0..3)).unwrap();
                let q = annihilation_form(k, l, statistics).unwrap();
                let nu = random_vector(6, &mut rng);
                let mode = DetectorMode::new(3, nu.clone()).unwrap();
                let via_form = evaluate_form(&q, &nu);
                let direct =
                    crate::detector::gram_condition(k, l, &mode, statistics).unwrap();
                assert!((via_form - direct).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn monomial_products_track_signs_and_exponents() {
        let a = Monomial::conj_times_plain(4, 0, 1);
        let b = Monomial::conj_times_plain(4, 1, 0).negated();
        let prod = Monomial::product([&a, &b]).unwrap();
        assert_eq!(prod.sign(), -1);
        assert!(prod.is_modulus_squared_over(&[0, 1]));
        assert!(!prod.is_modulus_squared_over(&[0]));
    }

    #[test]
    fn cyclic_pair_product_is_sign_contradiction() {
        // multiplying the three "lhs" monomials gives +|x₀x₂x₄|², the three
        // "rhs" monomials give −|x₁x₃x₅|²
        let forms = cyclic_pair_forms();
        let relations: Vec<_> = forms.iter().map(|f| f.relation(6)).collect();
        let lhs = Monomial::product(relations.iter().map(|(l, _)| l)).unwrap();
        let rhs = Monomial::product(relations.iter().map(|(_, r)| r)).unwrap();
        assert_eq!(lhs.sign(), 1);
        assert!(lhs.is_modulus_squared_over(&[0, 2, 4]));
        assert_eq!(rhs.sign(), -1);
        assert!(rhs.is_modulus_squared_over(&[1, 3, 5]));
    }

    #[test]
    fn fourier_weights_are_invertible() {
        let w = inverse_fourier_weights(3);
        let det = weight_determinant_magnitude(&w);
        assert!((det - 3.0 * 3.0_f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn nullspace_of_equal_components_system() {
        // v₀ + ωv₁ + ω²v₂ = 0 over reals: Re and Im rows; the null space is
        // spanned by (1,1,1)
        let w1 = root_of_unity(3, 1);
        let w2 = root_of_unity(3, 2);
        let rows = vec![
            vec![1.0, w1.re, w2.re],
            vec![0.0, w1.im, w2.im],
        ];
        let ns = real_nullspace(&rows);
        assert_eq!(ns.len(), 1);
        let b = &ns[0];
        assert!((b[0] - b[1]).abs() < 1e-10 && (b[1] - b[2]).abs() < 1e-10);
        assert!(functional_vanishes_on_solutions(&ns, &[1.0, -1.0, 0.0], 1e-10));
        assert!(functional_vanishes_on_solutions(&ns, &[0.0, 1.0, -1.0], 1e-10));
        assert!(!functional_vanishes_on_solutions(&ns, &[1.0, 1.0, 0.0], 1e-10));
    }

    #[test]
    fn express_identity_in_pauli_span() {
        let mut e01 = DMatrix::<Complex64>::zeros(2, 2);
        e01[(0, 1)] = Complex64::new(1.0, 0.0);
        let mut e10 = DMatrix::<Complex64>::zeros(2, 2);
        e10[(1, 0)] = Complex64::new(1.0, 0.0);
        let x = &e01 + &e10;
        let y = (&e01 - &e10) * Complex64::i();
        let (coeffs, residual) = express_in_span(&[x, y], &e01);
        assert!(residual < 1e-12);
        assert!((coeffs[0] - Complex64::new(0.5, 0.0)).norm() < 1e-12);
    }
}
