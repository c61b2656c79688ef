//! Generalized-measurement analysis: Kraus operators, post-first-click
//! residual states, and analytic infeasibility certificates.
//!
//! A general local detection is a POVM with Kraus operators Ê_i and elements
//! Π_i = Ê_i†Ê_i summing to the identity. A first click in detector i acts
//! as Ê_i ⊗ I on the two-particle state. Distinguishing 2d Bell states
//! forces every post-click second-particle state to be pure, which in turn
//! forces each Ê_i to be rank 1: writing Ê_i with column pattern α and row
//! pattern n, entry E[r][c] = α_c·n_r, the second-particle residual of a
//! Bell state depends on α alone (the n pattern factors out with the first
//! particle).
//!
//! The no-go verifiers assemble the pairwise-orthogonality conditions on
//! those residuals as sesquilinear forms in α and mechanically walk the
//! elimination chains: balance of grouped moduli, vanishing of cross
//! products, and a final sign contradiction of the shape |x|² = −|y|²,
//! which admits only α = 0 — a null detection channel. Each certificate also
//! carries a numeric floor: the smallest off-diagonal Gram norm the
//! feasibility optimizer could reach, bounded away from zero.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{bell_state, BellLabel, Statistics};
use crate::forms;
use crate::orbits::{enumerate_sets, BellSet, IndexTransform, TransformGroup};
use crate::search;

/// Singular-value ratio σ₂/σ₁ below which a post-click grid counts as
/// separable.
pub const SCHMIDT_RATIO_TOLERANCE: f64 = 1e-10;

/// Rank-1 Kraus operator E[r][c] = α_c·n_r built from a column pattern α
/// and a row pattern n.
#[derive(Clone, Debug, PartialEq)]
pub struct Rank1Kraus {
    d: usize,
    alpha: DVector<Complex64>,
    n: DVector<Complex64>,
}

impl Rank1Kraus {
    pub fn new(d: usize, alpha: DVector<Complex64>, n: DVector<Complex64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        for v in [&alpha, &n] {
            if v.len() != 2 * d {
                return Err(Error::BadVectorLength {
                    got: v.len(),
                    expected: 2 * d,
                });
            }
        }
        Ok(Self { d, alpha, n })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> &DVector<Complex64> {
        &self.alpha
    }

    pub fn row_pattern(&self) -> &DVector<Complex64> {
        &self.n
    }

    /// The full 2d×2d matrix; an outer product, hence rank ≤ 1.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(2 * self.d, 2 * self.d, |r, c| self.alpha[c] * self.n[r])
    }
}

/// One POVM outcome: a general Kraus operator E with element Π = E†E.
#[derive(Clone, Debug, PartialEq)]
pub struct PovmElement {
    kraus: DMatrix<Complex64>,
}

impl PovmElement {
    pub fn new(kraus: DMatrix<Complex64>) -> Result<Self> {
        if kraus.nrows() != kraus.ncols() {
            return Err(Error::NonSquareOperator {
                rows: kraus.nrows(),
                cols: kraus.ncols(),
            });
        }
        Ok(Self { kraus })
    }

    pub fn dim(&self) -> usize {
        self.kraus.nrows()
    }

    pub fn kraus(&self) -> &DMatrix<Complex64> {
        &self.kraus
    }

    /// Π = E†E.
    pub fn element(&self) -> DMatrix<Complex64> {
        self.kraus.adjoint() * &self.kraus
    }

    /// Smallest eigenvalue of Π; Π is positive semidefinite by construction,
    /// so this should never fall below roundoff.
    pub fn min_eigenvalue(&self) -> f64 {
        self.element()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }
}

/// ΣΠ_i = I within `tol`.
pub fn collection_is_complete(elements: &[PovmElement], tol: f64) -> bool {
    let Some(first) = elements.first() else {
        return false;
    };
    let n = first.dim();
    let mut sum = DMatrix::<Complex64>::zeros(n, n);
    for e in elements {
        if e.dim() != n {
            return false;
        }
        sum += e.element();
    }
    (sum - DMatrix::<Complex64>::identity(n, n)).norm() <= tol
}

/// Applies one POVM outcome to a pure state: returns the post-measurement
/// state (or `None` for a null outcome) and the outcome probability
/// ⟨ψ|E†E|ψ⟩.
pub fn povm_transform_probability(
    e: &PovmElement,
    psi: &DVector<Complex64>,
) -> Result<(Option<DVector<Complex64>>, f64)> {
    if psi.len() != e.dim() {
        return Err(Error::BadVectorLength {
            got: psi.len(),
            expected: e.dim(),
        });
    }
    if (psi.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnitNorm);
    }
    let out = e.kraus() * psi;
    let p = out.norm_squared();
    if out.norm() <= 1e-12 {
        return Ok((None, p));
    }
    Ok((Some(out.normalize()), p))
}

/// Result of applying a first click to one particle of a Bell state.
#[derive(Clone, Debug, PartialEq)]
pub enum ClickOutcome {
    /// The operator annihilates the state.
    Null,
    /// The post-click grid stayed entangled (Schmidt rank > 1).
    Entangled { schmidt_ratio: f64 },
    /// The post-click grid factored; `particle2` is the second-particle
    /// state left behind, unnormalized and fixed up to scale.
    Separable { particle2: DVector<Complex64> },
}

impl ClickOutcome {
    pub fn is_separable(&self) -> bool {
        matches!(self, ClickOutcome::Separable { .. })
    }
}

/// Canonical second-particle residual of a rank-1 first click with column
/// pattern α: the row pattern factors out with the detected particle, so
/// residual[j] = Σ_m α_m·A[m][j].
pub fn first_click_particle2(
    alpha: &DVector<Complex64>,
    label: BellLabel,
    statistics: Statistics,
) -> Result<DVector<Complex64>> {
    let d = label.d();
    if alpha.len() != 2 * d {
        return Err(Error::BadVectorLength {
            got: alpha.len(),
            expected: 2 * d,
        });
    }
    let state = bell_state(label, statistics);
    Ok(state.grid().transpose() * alpha)
}

/// Applies a general Kraus operator to particle 1 of the symmetrized Bell
/// state and classifies the outcome by Schmidt rank of the resulting grid.
pub fn apply_first_click(
    kraus: &DMatrix<Complex64>,
    label: BellLabel,
    statistics: Statistics,
) -> Result<ClickOutcome> {
    let d = label.d();
    if kraus.nrows() != kraus.ncols() {
        return Err(Error::NonSquareOperator {
            rows: kraus.nrows(),
            cols: kraus.ncols(),
        });
    }
    if kraus.nrows() != 2 * d {
        return Err(Error::DimensionMismatch(kraus.nrows(), 2 * d));
    }
    let state = bell_state(label, statistics);
    let applied = kraus * state.grid();
    if applied.norm() <= 1e-12 {
        return Ok(ClickOutcome::Null);
    }
    let svd = applied.clone().svd(false, true);
    let mut singular: Vec<f64> = svd.singular_values.iter().copied().collect();
    singular.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let ratio = singular[1] / singular[0];
    if ratio < SCHMIDT_RATIO_TOLERANCE {
        let v_t = svd.v_t.expect("requested");
        // grid = σ·u·v^H = u ⊗ (σ·row of v^H): the second factor is the
        // dominant row of v^H scaled by its singular value
        let top = svd
            .singular_values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let sigma = svd.singular_values[top];
        let particle2 = DVector::from_fn(2 * d, |j, _| sigma * v_t[(top, j)]);
        Ok(ClickOutcome::Separable { particle2 })
    } else {
        Ok(ClickOutcome::Entangled {
            schmidt_ratio: ratio,
        })
    }
}

/// First click with a rank-1 Kraus operator. Separability is still verified
/// through the general Schmidt check, but the returned residual uses the
/// canonical α-only form so that residuals probed over different α are
/// mutually consistent.
pub fn apply_first_click_rank1(
    kraus: &Rank1Kraus,
    label: BellLabel,
    statistics: Statistics,
) -> Result<ClickOutcome> {
    match apply_first_click(&kraus.matrix(), label, statistics)? {
        ClickOutcome::Separable { .. } => Ok(ClickOutcome::Separable {
            particle2: first_click_particle2(kraus.alpha(), label, statistics)?,
        }),
        other => Ok(other),
    }
}

/// Gram matrix of the canonical second-particle residuals across a set.
/// Entry (k, l) is ⟨residual_k | residual_l⟩; only α enters.
pub fn residual_gram(
    set: &BellSet,
    alpha: &DVector<Complex64>,
    statistics: Statistics,
) -> Result<DMatrix<Complex64>> {
    let residuals = set
        .labels()
        .iter()
        .map(|&l| first_click_particle2(alpha, l, statistics))
        .collect::<Result<Vec<_>>>()?;
    let n = residuals.len();
    Ok(DMatrix::from_fn(n, n, |k, l| {
        residuals[k].dotc(&residuals[l])
    }))
}

/// One mechanically checked step of an infeasibility chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateStep {
    pub name: String,
    pub detail: String,
    pub passed: bool,
}

/// Outcome of an analytic no-go verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub statistics: Statistics,
    /// All exact steps verified: the conditions admit only the null channel.
    pub exact_infeasible: bool,
    pub steps: Vec<CertificateStep>,
    /// Smallest off-diagonal Gram norm found by the optimizer over unit α.
    pub numeric_floor: f64,
    pub restarts: usize,
}

impl Certificate {
    pub fn verified(&self) -> bool {
        self.exact_infeasible && self.steps.iter().all(|s| s.passed)
    }
}

fn step(name: &str, detail: impl Into<String>, passed: bool) -> CertificateStep {
    CertificateStep {
        name: name.to_string(),
        detail: detail.into(),
        passed,
    }
}

fn offdiagonal_norm(m: &DMatrix<Complex64>) -> f64 {
    let mut out = 0.0;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            if r != c {
                out += m[(r, c)].norm_sqr();
            }
        }
    }
    out.sqrt()
}

/// Numeric floor: minimizes the summed squared pairwise residual overlaps
/// over unit α and reports the off-diagonal Gram norm at the best point.
fn numeric_floor(
    labels: &[BellLabel],
    statistics: Statistics,
    restarts: usize,
    seed: u64,
) -> Result<f64> {
    let mut pair_forms = Vec::new();
    for (i, &k) in labels.iter().enumerate() {
        for &l in &labels[i + 1..] {
            pair_forms.push(forms::first_click_form(k, l, statistics)?);
        }
    }
    let n = 2 * labels[0].d();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = search::minimize_forms(&pair_forms, n, restarts, 500, 0.0, &mut rng);
    Ok(outcome.best_cost.sqrt())
}

fn diagonal_rows(q: &DMatrix<Complex64>, tol: f64) -> Option<[Vec<f64>; 2]> {
    if offdiagonal_norm(q) > tol {
        return None;
    }
    let re = (0..q.nrows()).map(|i| q[(i, i)].re).collect();
    let im = (0..q.nrows()).map(|i| q[(i, i)].im).collect();
    Some([re, im])
}

fn difference_functional(n: usize, a: usize, b: usize) -> Vec<f64> {
    let mut f = vec![0.0; n];
    f[a] = 1.0;
    f[b] = -1.0;
    f
}

/// Verifies that no rank-1 first click leaves the four d=2 Bell-state
/// residuals pairwise orthogonal, for the given statistics.
///
/// Chain: the two within-class conditions are diagonal forms balancing the
/// grouped moduli (|α₀| = |α₂|, |α₁| = |α₃|); the four cross-class
/// conditions span the cross-product matrix units, forcing α₀*α₂ = 0 and
/// α₁*α₃ = 0; together these admit only α = 0.
pub fn qubit_povm_nogo(statistics: Statistics) -> Result<Certificate> {
    qubit_povm_nogo_with(statistics, 200, 0x9e17)
}

pub fn qubit_povm_nogo_with(
    statistics: Statistics,
    restarts: usize,
    seed: u64,
) -> Result<Certificate> {
    let l = |c, p| BellLabel::new(2, c, p);
    let phi_plus = l(0, 0)?;
    let phi_minus = l(0, 1)?;
    let psi_plus = l(1, 0)?;
    let psi_minus = l(1, 1)?;
    let tol = 1e-12;

    let mut steps = Vec::new();

    // within-class conditions are diagonal in the moduli
    let q_phi = forms::first_click_form(phi_plus, phi_minus, statistics)?;
    let q_psi = forms::first_click_form(psi_plus, psi_minus, statistics)?;
    let diag_phi = diagonal_rows(&q_phi, tol);
    let diag_psi = diagonal_rows(&q_psi, tol);
    let diagonal_ok = diag_phi.is_some() && diag_psi.is_some();
    steps.push(step(
        "within-class-diagonal",
        "the two same-class conditions depend only on the squared moduli of α",
        diagonal_ok,
    ));

    // moduli balance: |α₀| = |α₂| and |α₁| = |α₃| hold on every solution
    let moduli_ok = match (diag_phi, diag_psi) {
        (Some(r1), Some(r2)) => {
            let rows: Vec<Vec<f64>> = r1.into_iter().chain(r2).collect();
            let nullspace = forms::real_nullspace(&rows);
            [(0usize, 2usize), (1, 3)].iter().all(|&(a, b)| {
                forms::functional_vanishes_on_solutions(
                    &nullspace,
                    &difference_functional(4, a, b),
                    1e-9,
                )
            })
        }
        _ => false,
    };
    steps.push(step(
        "moduli-balance",
        "|α₀|² − |α₂|² and |α₁|² − |α₃|² vanish on every solution of the within-class conditions",
        moduli_ok,
    ));

    // cross conditions span the four cross-product matrix units
    let cross = [
        forms::first_click_form(phi_plus, psi_plus, statistics)?,
        forms::first_click_form(phi_minus, psi_minus, statistics)?,
        forms::first_click_form(phi_plus, psi_minus, statistics)?,
        forms::first_click_form(phi_minus, psi_plus, statistics)?,
    ];
    let unit = |a: usize, b: usize| {
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        m[(a, b)] = Complex64::new(1.0, 0.0);
        m
    };
    let cross_ok = [(0usize, 2usize), (2, 0), (1, 3), (3, 1)].iter().all(|&(a, b)| {
        let (_, residual) = forms::express_in_span(&cross, &unit(a, b));
        residual < 1e-10
    });
    steps.push(step(
        "cross-products-vanish",
        "each of α₀*α₂, α₂*α₀, α₁*α₃, α₃*α₁ is a combination of the four cross-class conditions, so all vanish",
        cross_ok,
    ));

    let exact = diagonal_ok && moduli_ok && cross_ok;
    steps.push(step(
        "null-channel",
        "|α₀| = |α₂| with α₀*α₂ = 0 forces α₀ = α₂ = 0 (|α₀|² = |α₀||α₂| = |α₀*α₂|); \
         likewise for α₁, α₃ — only the null detection channel satisfies all six conditions",
        exact,
    ));

    let floor = numeric_floor(
        &[phi_plus, phi_minus, psi_plus, psi_minus],
        statistics,
        restarts,
        seed,
    )?;
    steps.push(step(
        "numeric-floor",
        format!("optimizer floor for the off-diagonal Gram norm over unit α: {floor:.6e}"),
        floor > 1e-3,
    ));

    Ok(Certificate {
        name: "qubit-povm".into(),
        statistics,
        exact_infeasible: exact,
        steps,
        numeric_floor: floor,
        restarts,
    })
}

/// Verifies that no rank-1 first click leaves the residuals of the qutrit
/// subset {Ψ_0^0, Ψ_0^1, Ψ_0^2, Ψ_1^0, Ψ_1^1} pairwise orthogonal.
///
/// Chain: the two phase-orthogonality conditions force the modulus chains
/// |α₀| = |α₂| = |α₄| and |α₁| = |α₃| = |α₅|; the three cross-class
/// conditions are an invertible Fourier combination of the three cyclic
/// pair sums, which therefore vanish; multiplying the resulting relations
/// gives |α₀α₂α₄|² = −|α₁α₃α₅|², so both products vanish and the chains
/// null every coefficient.
pub fn qutrit_subset_nogo(statistics: Statistics) -> Result<Certificate> {
    qutrit_subset_nogo_with(statistics, 200, 0x51a3)
}

pub fn qutrit_subset_nogo_with(
    statistics: Statistics,
    restarts: usize,
    seed: u64,
) -> Result<Certificate> {
    let l = |c, p| BellLabel::new(3, c, p);
    let labels = [l(0, 0)?, l(0, 1)?, l(0, 2)?, l(1, 0)?, l(1, 1)?];
    let tol = 1e-12;

    let mut steps = Vec::new();

    // phase-orthogonality conditions are diagonal
    let q1 = forms::first_click_form(labels[0], labels[1], statistics)?;
    let q2 = forms::first_click_form(labels[3], labels[4], statistics)?;
    let d1 = diagonal_rows(&q1, tol);
    let d2 = diagonal_rows(&q2, tol);
    let diagonal_ok = d1.is_some() && d2.is_some();
    steps.push(step(
        "phase-conditions-diagonal",
        "⟨Ψ_0^0|Ψ_0^1⟩ and ⟨Ψ_1^0|Ψ_1^1⟩ residual conditions depend only on the squared moduli of α",
        diagonal_ok,
    ));

    // modulus chains
    let chains_ok = match (d1, d2) {
        (Some(r1), Some(r2)) => {
            let rows: Vec<Vec<f64>> = r1.into_iter().chain(r2).collect();
            let nullspace = forms::real_nullspace(&rows);
            [(0usize, 2usize), (2, 4), (1, 3), (3, 5)].iter().all(|&(a, b)| {
                forms::functional_vanishes_on_solutions(
                    &nullspace,
                    &difference_functional(6, a, b),
                    1e-9,
                )
            })
        }
        _ => false,
    };
    steps.push(step(
        "modulus-chains",
        "|α₀| = |α₂| = |α₄| and |α₁| = |α₃| = |α₅| hold on every solution of the phase conditions",
        chains_ok,
    ));

    // cross-class conditions are an invertible Fourier combination of the
    // cyclic pair sums
    let computed = [
        forms::first_click_form(labels[0], labels[3], statistics)?,
        forms::first_click_form(labels[1], labels[3], statistics)?,
        forms::first_click_form(labels[2], labels[3], statistics)?,
    ];
    let pair_forms = forms::cyclic_pair_forms();
    let pair_matrices: Vec<DMatrix<Complex64>> =
        pair_forms.iter().map(|p| p.matrix(6)).collect();
    let weights = forms::inverse_fourier_weights(3);
    let extraction = forms::verify_weighted_extraction(&computed, &pair_matrices, &weights, 1e-10);
    let det = forms::weight_determinant_magnitude(&weights);
    let extraction_ok = extraction.is_ok() && det > 1e-9;
    steps.push(step(
        "cross-class-extraction",
        match &extraction {
            Ok(s) => format!(
                "cross-class conditions equal {s:.6} × Fourier combinations of the cyclic pair sums (|det W| = {det:.3}), so all three pair sums vanish"
            ),
            Err(e) => format!("extraction failed: {e}"),
        },
        extraction_ok,
    ));

    // product of the pair relations is a sign contradiction
    let relations: Vec<_> = pair_forms.iter().map(|p| p.relation(6)).collect();
    let lhs = forms::Monomial::product(relations.iter().map(|(a, _)| a)).unwrap();
    let rhs = forms::Monomial::product(relations.iter().map(|(_, b)| b)).unwrap();
    let product_ok = lhs.sign() == 1
        && lhs.is_modulus_squared_over(&[0, 2, 4])
        && rhs.sign() == -1
        && rhs.is_modulus_squared_over(&[1, 3, 5]);
    steps.push(step(
        "product-contradiction",
        "multiplying the three pair relations gives |α₀α₂α₄|² = −|α₁α₃α₅|², so both products vanish",
        product_ok,
    ));

    let exact = diagonal_ok && chains_ok && extraction_ok && product_ok;
    steps.push(step(
        "null-channel",
        "a vanishing product zeroes one coefficient of its triple, and the modulus chains \
         propagate the zero through the triple; both triples die, so α = 0",
        exact,
    ));

    let floor = numeric_floor(&labels, statistics, restarts, seed)?;
    steps.push(step(
        "numeric-floor",
        format!("optimizer floor for the off-diagonal Gram norm over unit α: {floor:.6e}"),
        floor > 1e-6,
    ));

    Ok(Certificate {
        name: "qutrit-subset-povm".into(),
        statistics,
        exact_infeasible: exact,
        steps,
        numeric_floor: floor,
        restarts,
    })
}

/// The five-state subset whose residual conditions are unsatisfiable; every
/// six-state set maps onto a superset of it under the transform group.
pub fn fatal_five_subset() -> BellSet {
    BellSet::from_pairs(3, &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1)])
        .expect("static set is well-formed")
}

/// Coverage of one six-state set: the transform carrying it onto a superset
/// of the fatal five-state subset.
#[derive(Clone, Debug)]
pub struct CoverageEntry {
    pub set: BellSet,
    pub witness: Option<IndexTransform>,
}

/// Result of checking all 84 six-state sets.
#[derive(Clone, Debug)]
pub struct CoverageReport {
    pub fatal_subset: BellSet,
    pub entries: Vec<CoverageEntry>,
}

impl CoverageReport {
    pub fn all_covered(&self) -> bool {
        self.entries.iter().all(|e| e.witness.is_some())
    }
}

/// For every set of six qutrit Bell states, finds a group element g such
/// that g(set) contains the fatal five-state subset, proving no six-state
/// set survives a general LELM measurement.
pub fn six_set_coverage() -> Result<CoverageReport> {
    let fatal = fatal_five_subset();
    let group = TransformGroup::qutrit();
    let entries = enumerate_sets(6, 3)?
        .into_iter()
        .map(|set| {
            let witness = group
                .elements()
                .iter()
                .find(|t| {
                    set.map(t)
                        .map(|mapped| fatal.is_subset_of(&mapped))
                        .unwrap_or(false)
                })
                .cloned();
            CoverageEntry { set, witness }
        })
        .collect();
    Ok(CoverageReport {
        fatal_subset: fatal,
        entries,
    })
}

/// A general LELM POVM cannot distinguish more than 2d Bell states: the
/// first detection carries no information, so distinguishability rests on
/// pairwise-orthogonal second-particle states, of which a 2d-dimensional
/// space holds at most 2d.
pub fn distinguishability_upper_bound(d: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(2 * d)
}

/// Pigeonhole witness: among more than `dim` nonzero vectors, some pair has
/// a nonzero overlap (a Gram matrix of k > dim vectors has rank ≤ dim and
/// cannot be diagonal with a positive diagonal). Returns the pair with the
/// largest overlap magnitude, or `None` when the list does not exceed the
/// dimension.
pub fn orthogonality_excess_witness(
    vectors: &[DVector<Complex64>],
) -> Option<(usize, usize, f64)> {
    let dim = vectors.first()?.len();
    if vectors.len() <= dim {
        return None;
    }
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            let overlap = vectors[i].dotc(&vectors[j]).norm();
            if best.map_or(true, |(_, _, b)| overlap > b) {
                best = Some((i, j, overlap));
            }
        }
    }
    best
}
