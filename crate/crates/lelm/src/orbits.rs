//! Channel-local equivalence transformations on qutrit Bell labels,
//! tic-tac-toe classification of Bell-state sets, and orbit computation.
//!
//! Four unitary operations, each acting on a single input channel, permute
//! the nine qutrit Bell states among themselves (up to global phase):
//!
//! 1. Cycling the variable value in the right channel sends (c,p) → (c+1,p).
//! 2. Value-proportional phases in the left channel send (c,p) → (c,p+1).
//! 3. Phases on the two value-0 kets send (c,p) → (c,p−c).
//! 4. A discrete-Fourier change of basis with value-0 phases in the new
//!    basis sends (c,p) → (c+p,p), with a global phase of 4π/3 whenever
//!    p ≠ 0.
//!
//! Each transformation therefore acts as an affine bijection on the label
//! grid Z₃×Z₃. The generated group (order 216) partitions the 126 four-state
//! sets into classes of 72 "winners" and 54 "losers", named after the 3×3
//! tic-tac-toe diagram of a set: winners contain three in a row — a full
//! row, a full column, or a transversal (one cell per row and per column,
//! which column permutation carries onto a diagonal). The 84 six-state sets
//! split into 12 anti-winners and 72 anti-losers according to whether the
//! three missing labels win.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{root_of_unity, BellLabel, DetectorMode, TwoParticleState};

/// A duplicate-free set of Bell labels sharing one dimension, kept in
/// canonical (c-major, then p) order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BellSet {
    d: usize,
    labels: Vec<BellLabel>,
}

impl BellSet {
    pub fn new(d: usize, mut labels: Vec<BellLabel>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::MalformedSet);
        }
        if let Some(l) = labels.iter().find(|l| l.d() != d) {
            return Err(Error::DimensionMismatch(l.d(), d));
        }
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedSet);
        }
        Ok(Self { d, labels })
    }

    /// Builds a set from (c, p) pairs.
    pub fn from_pairs(d: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let labels = pairs
            .iter()
            .map(|&(c, p)| BellLabel::new(d, c, p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, labels)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[BellLabel] {
        &self.labels
    }

    pub fn contains(&self, label: &BellLabel) -> bool {
        self.labels.binary_search(label).is_ok()
    }

    pub fn is_subset_of(&self, other: &BellSet) -> bool {
        self.labels.iter().all(|l| other.contains(l))
    }

    /// Labels as (c, p) pairs, canonical order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.labels.iter().map(|l| (l.c(), l.p())).collect()
    }

    /// The complementary set within the full d² label grid.
    pub fn complement(&self) -> Result<BellSet> {
        let labels: Vec<BellLabel> = BellLabel::all(self.d)?
            .into_iter()
            .filter(|l| !self.contains(l))
            .collect();
        BellSet::new(self.d, labels)
    }

    /// Applies a transformation's label action to every member.
    pub fn map(&self, t: &IndexTransform) -> Result<BellSet> {
        let labels = self
            .labels
            .iter()
            .map(|&l| t.apply_label(l))
            .collect::<Result<Vec<_>>>()?;
        BellSet::new(self.d, labels)
    }

    /// 9-bit occupancy mask over cells c·3+p; qutrit sets only.
    fn mask(&self) -> Result<u16> {
        if self.d != 3 {
            return Err(Error::RequiresQutrit(self.d));
        }
        Ok(self
            .labels
            .iter()
            .fold(0u16, |m, l| m | 1 << (l.c() * 3 + l.p())))
    }

    pub fn diagram(&self) -> Result<TicTacToeDiagram> {
        TicTacToeDiagram::from_set(self)
    }
}

impl std::fmt::Display for BellSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// 3×3 occupancy grid of a qutrit Bell-state set; rows are indexed by the
/// correlation class c, columns by the phase class p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TicTacToeDiagram {
    grid: [[bool; 3]; 3],
}

impl TicTacToeDiagram {
    pub fn from_set(set: &BellSet) -> Result<Self> {
        if set.d() != 3 {
            return Err(Error::RequiresQutrit(set.d()));
        }
        let mut grid = [[false; 3]; 3];
        for l in set.labels() {
            grid[l.c()][l.p()] = true;
        }
        Ok(Self { grid })
    }

    pub fn cell(&self, c: usize, p: usize) -> bool {
        self.grid[c][p]
    }

    pub fn cell_count(&self) -> usize {
        self.grid.iter().flatten().filter(|&&x| x).count()
    }
}

impl std::fmt::Display for TicTacToeDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in 0..3 {
            for p in 0..3 {
                write!(f, "{}", if self.grid[c][p] { 'X' } else { '.' })?;
            }
            if c < 2 {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Class of a 4-set or 6-set under the tic-tac-toe rule.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TicTacToeClass {
    Winner,
    Loser,
    AntiWinner,
    AntiLoser,
}

impl std::fmt::Display for TicTacToeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TicTacToeClass::Winner => "winner",
            TicTacToeClass::Loser => "loser",
            TicTacToeClass::AntiWinner => "anti-winner",
            TicTacToeClass::AntiLoser => "anti-loser",
        };
        write!(f, "{s}")
    }
}

/// The twelve winning 3-cell patterns as 9-bit masks: 3 rows, 3 columns, and
/// 6 transversals (cells (c, σ(c)) for each permutation σ of {0,1,2}).
pub fn winning_patterns() -> Vec<u16> {
    let mut out = Vec::with_capacity(12);
    for c in 0..3u16 {
        out.push(0b111 << (3 * c)); // row
    }
    for p in 0..3u16 {
        out.push(1 << p | 1 << (p + 3) | 1 << (p + 6)); // column
    }
    for perm in (0..3usize).permutations(3) {
        let mask = (0..3).fold(0u16, |m, c| m | 1 << (c * 3 + perm[c]));
        out.push(mask);
    }
    out
}

/// Classifies a 4-set as winner/loser or a 6-set as anti-winner/anti-loser.
///
/// A 4-set wins when it contains a winning 3-pattern; a 6-set anti-wins when
/// its 3-cell complement is a winning pattern.
pub fn classify_tictactoe(set: &BellSet) -> Result<TicTacToeClass> {
    let mask = set.mask()?;
    match set.len() {
        4 => {
            let won = winning_patterns().iter().any(|&w| mask & w == w);
            Ok(if won {
                TicTacToeClass::Winner
            } else {
                TicTacToeClass::Loser
            })
        }
        6 => {
            let comp = !mask & 0x1ff;
            let won = winning_patterns().iter().any(|&w| comp == w);
            Ok(if won {
                TicTacToeClass::AntiWinner
            } else {
                TicTacToeClass::AntiLoser
            })
        }
        n => Err(Error::UnsupportedSetSize(n)),
    }
}

/// All C(d², k) Bell-label subsets of size k, in canonical order.
pub fn enumerate_sets(k: usize, d: usize) -> Result<Vec<BellSet>> {
    let labels = BellLabel::all(d)?;
    if k == 0 || k > labels.len() {
        return Err(Error::SubsetTooLarge {
            k,
            total: labels.len(),
        });
    }
    Ok(labels
        .into_iter()
        .combinations(k)
        .map(|ls| BellSet::new(d, ls).expect("combinations are sorted and duplicate-free"))
        .collect())
}

/// The four generating transformations.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    T1,
    T2,
    T3,
    T4,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::T1, Generator::T2, Generator::T3, Generator::T4];

    fn label(&self) -> &'static str {
        match self {
            Generator::T1 => "T1",
            Generator::T2 => "T2",
            Generator::T3 => "T3",
            Generator::T4 => "T4",
        }
    }
}

/// Affine action on (c, p) over Z₃ together with the channel-local
/// single-particle unitaries realizing it.
///
/// The label action of a transform agrees with its unitaries: applying the
/// mode actions to |Ψ_x⟩ yields |Ψ_{labelAction(x)}⟩ up to a global phase.
#[derive(Clone, Debug)]
pub struct IndexTransform {
    word: Vec<Generator>,
    linear: [[u8; 2]; 2],
    offset: [u8; 2],
    mode_l: DMatrix<Complex64>,
    mode_r: DMatrix<Complex64>,
}

impl IndexTransform {
    pub fn identity() -> Self {
        Self {
            word: Vec::new(),
            linear: [[1, 0], [0, 1]],
            offset: [0, 0],
            mode_l: DMatrix::identity(3, 3),
            mode_r: DMatrix::identity(3, 3),
        }
    }

    pub fn generator(g: Generator) -> Self {
        let w = |k: i64| root_of_unity(3, k);
        let eye = DMatrix::<Complex64>::identity(3, 3);
        let (linear, offset, mode_l, mode_r) = match g {
            // cycle the variable value in the right channel: |s,R⟩ → |s+1,R⟩
            Generator::T1 => {
                let mut shift = DMatrix::zeros(3, 3);
                for s in 0..3 {
                    shift[((s + 1) % 3, s)] = Complex64::new(1.0, 0.0);
                }
                ([[1, 0], [0, 1]], [1, 0], eye.clone(), shift)
            }
            // value-proportional phases in the left channel
            Generator::T2 => {
                let l = DMatrix::from_diagonal(&DVector::from_vec(vec![w(0), w(1), w(2)]));
                ([[1, 0], [0, 1]], [0, 1], l, eye.clone())
            }
            // phases on the value-0 kets of both channels
            Generator::T3 => {
                let l = DMatrix::from_diagonal(&DVector::from_vec(vec![w(1), w(0), w(0)]));
                let r = DMatrix::from_diagonal(&DVector::from_vec(vec![w(2), w(0), w(0)]));
                ([[1, 0], [2, 1]], [0, 0], l, r)
            }
            // Fourier basis change + value-0 phases + inverse Fourier,
            // which works out to I + (ω−1)/3 · J on the left (conjugate on
            // the right)
            Generator::T4 => {
                let u = (w(1) - w(0)) / Complex64::new(3.0, 0.0);
                let mut l = eye.clone();
                let mut r = eye.clone();
                for a in 0..3 {
                    for b in 0..3 {
                        l[(a, b)] += u;
                        r[(a, b)] += u.conj();
                    }
                }
                ([[1, 1], [0, 1]], [0, 0], l, r)
            }
        };
        Self {
            word: vec![g],
            linear,
            offset,
            mode_l,
            mode_r,
        }
    }

    /// self ∘ other: apply `other` first.
    pub fn compose(&self, other: &IndexTransform) -> Self {
        let mut linear = [[0u8; 2]; 2];
        let mut offset = [0u8; 2];
        for i in 0..2 {
            for j in 0..2 {
                linear[i][j] =
                    (0..2).map(|k| self.linear[i][k] * other.linear[k][j]).sum::<u8>() % 3;
            }
            offset[i] = ((0..2).map(|k| self.linear[i][k] * other.offset[k]).sum::<u8>()
                + self.offset[i])
                % 3;
        }
        let mut word = other.word.clone();
        word.extend(&self.word);
        Self {
            word,
            linear,
            offset,
            mode_l: &self.mode_l * &other.mode_l,
            mode_r: &self.mode_r * &other.mode_r,
        }
    }

    /// Key identifying the transform by its affine label action.
    pub fn action_key(&self) -> ([[u8; 2]; 2], [u8; 2]) {
        (self.linear, self.offset)
    }

    /// Generator word realizing the transform, e.g. "T1∘T3"; "id" when empty.
    pub fn name(&self) -> String {
        if self.word.is_empty() {
            "id".to_string()
        } else {
            // rightmost generator in the word applies first
            self.word
                .iter()
                .rev()
                .map(|g| g.label())
                .collect::<Vec<_>>()
                .join("∘")
        }
    }

    pub fn is_identity(&self) -> bool {
        self.action_key() == ([[1, 0], [0, 1]], [0, 0])
    }

    pub fn apply_label(&self, x: BellLabel) -> Result<BellLabel> {
        if x.d() != 3 {
            return Err(Error::RequiresQutrit(x.d()));
        }
        let (c, p) = (x.c() as u8, x.p() as u8);
        let c2 = (self.linear[0][0] * c + self.linear[0][1] * p + self.offset[0]) % 3;
        let p2 = (self.linear[1][0] * c + self.linear[1][1] * p + self.offset[1]) % 3;
        BellLabel::new(3, c2 as usize, p2 as usize)
    }

    /// Applies the channel-local unitaries to a detector mode ket.
    pub fn apply_mode(&self, mode: &DetectorMode) -> Result<DetectorMode> {
        if mode.d() != 3 {
            return Err(Error::RequiresQutrit(mode.d()));
        }
        let mut nu = DVector::zeros(6);
        for s in 0..3 {
            for t in 0..3 {
                nu[2 * s] += self.mode_l[(s, t)] * mode.coefficient(2 * t);
                nu[2 * s + 1] += self.mode_r[(s, t)] * mode.coefficient(2 * t + 1);
            }
        }
        DetectorMode::new(3, nu)
    }

    /// Applies U ⊗ U to a two-particle state, where U is the single-particle
    /// unitary assembled from the channel blocks.
    pub fn apply_state(&self, state: &TwoParticleState) -> Result<TwoParticleState> {
        if state.d() != 3 {
            return Err(Error::RequiresQutrit(state.d()));
        }
        let u = self.single_particle_unitary();
        let amp = &u * state.grid() * u.transpose();
        TwoParticleState::from_grid(3, state.statistics(), amp)
    }

    /// The 6×6 block unitary acting on the interleaved single-particle basis.
    pub fn single_particle_unitary(&self) -> DMatrix<Complex64> {
        let mut u = DMatrix::zeros(6, 6);
        for s in 0..3 {
            for t in 0..3 {
                u[(2 * s, 2 * t)] = self.mode_l[(s, t)];
                u[(2 * s + 1, 2 * t + 1)] = self.mode_r[(s, t)];
            }
        }
        u
    }

    pub fn mode_action_left(&self) -> &DMatrix<Complex64> {
        &self.mode_l
    }

    pub fn mode_action_right(&self) -> &DMatrix<Complex64> {
        &self.mode_r
    }
}

/// The full transformation group generated by T1–T4, with one representative
/// (shortest word found by breadth-first closure) per affine label action.
pub struct TransformGroup {
    elements: Vec<IndexTransform>,
}

impl TransformGroup {
    /// The qutrit group; computed once and cached. Contains 216 elements.
    pub fn qutrit() -> &'static TransformGroup {
        static GROUP: OnceLock<TransformGroup> = OnceLock::new();
        GROUP.get_or_init(|| {
            let mut by_key = HashMap::new();
            let id = IndexTransform::identity();
            let mut queue = VecDeque::from([id.action_key()]);
            by_key.insert(id.action_key(), id);
            while let Some(key) = queue.pop_front() {
                let current = by_key[&key].clone();
                for g in Generator::ALL {
                    let next = IndexTransform::generator(g).compose(&current);
                    let next_key = next.action_key();
                    if let std::collections::hash_map::Entry::Vacant(e) = by_key.entry(next_key) {
                        e.insert(next);
                        queue.push_back(next_key);
                    }
                }
            }
            let mut elements: Vec<IndexTransform> = by_key.into_values().collect();
            elements.sort_by_key(|t| (t.word.len(), t.action_key()));
            TransformGroup { elements }
        })
    }

    pub fn elements(&self) -> &[IndexTransform] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Closure of {set} under the label actions of T1–T4, in canonical order.
pub fn orbit(set: &BellSet) -> Result<Vec<BellSet>> {
    if set.d() != 3 {
        return Err(Error::RequiresQutrit(set.d()));
    }
    let generators: Vec<IndexTransform> =
        Generator::ALL.iter().map(|&g| IndexTransform::generator(g)).collect();
    let mut seen = HashSet::from([set.clone()]);
    let mut queue = VecDeque::from([set.clone()]);
    while let Some(current) = queue.pop_front() {
        for g in &generators {
            let next = current.map(g)?;
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<BellSet> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Searches the transform group for an element carrying `a` onto `b`.
pub fn find_transform(a: &BellSet, b: &BellSet) -> Result<Option<IndexTransform>> {
    if a.d() != 3 || b.d() != 3 {
        return Err(Error::RequiresQutrit(a.d().min(b.d())));
    }
    if a.len() != b.len() {
        return Ok(None);
    }
    for t in TransformGroup::qutrit().elements() {
        if &a.map(t)? == b {
            return Ok(Some(t.clone()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{bell_state, Channel, SingleParticleMode, Statistics};

    fn label(c: usize, p: usize) -> BellLabel {
        BellLabel::new(3, c, p).unwrap()
    }

    #[test]
    fn generator_label_actions() {
        let t1 = IndexTransform::generator(Generator::T1);
        assert_eq!(t1.apply_label(label(0, 0)).unwrap(), label(1, 0));

        let t2 = IndexTransform::generator(Generator::T2);
        assert_eq!(t2.apply_label(label(1, 1)).unwrap(), label(1, 2));

        // The explicit value-0 phase unitaries send (c,p) to (c,p−c); the
        // p+c direction is realized by applying the transformation twice.
        let t3 = IndexTransform::generator(Generator::T3);
        assert_eq!(t3.apply_label(label(2, 1)).unwrap(), label(2, 2));
        let t3_twice = t3.compose(&t3);
        assert_eq!(t3_twice.apply_label(label(2, 1)).unwrap(), label(2, 0));

        let t4 = IndexTransform::generator(Generator::T4);
        assert_eq!(t4.apply_label(label(1, 2)).unwrap(), label(0, 2));
    }

    #[test]
    fn generator_mode_actions() {
        let w = |k: i64| root_of_unity(3, k);

        // T2 phases |1,L⟩ by e^{2πi/3}
        let t2 = IndexTransform::generator(Generator::T2);
        let mode = DetectorMode::basis(SingleParticleMode::new(1, Channel::Left, 3).unwrap());
        let out = t2.apply_mode(&mode).unwrap();
        assert!((out.coefficient(2) - w(1)).norm() < 1e-15);
        assert_eq!(out.ket_count(), 1);

        // T1 cycles |0,R⟩ to |1,R⟩
        let t1 = IndexTransform::generator(Generator::T1);
        let mode = DetectorMode::basis(SingleParticleMode::new(0, Channel::Right, 3).unwrap());
        let out = t1.apply_mode(&mode).unwrap();
        assert!((out.coefficient(3) - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        // T4 sends |0,L⟩ to (1/√3)(e^{iπ/6}|0,L⟩ + e^{i5π/6}|1,L⟩ + e^{i5π/6}|2,L⟩)
        let t4 = IndexTransform::generator(Generator::T4);
        let mode = DetectorMode::basis(SingleParticleMode::new(0, Channel::Left, 3).unwrap());
        let out = t4.apply_mode(&mode).unwrap();
        let s3 = 3.0_f64.sqrt();
        let e = |t: f64| Complex64::new(t.cos() / s3, t.sin() / s3);
        let pi = std::f64::consts::PI;
        assert!((out.coefficient(0) - e(pi / 6.0)).norm() < 1e-12);
        assert!((out.coefficient(2) - e(5.0 * pi / 6.0)).norm() < 1e-12);
        assert!((out.coefficient(4) - e(5.0 * pi / 6.0)).norm() < 1e-12);
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generator_unitaries_are_unitary() {
        for g in Generator::ALL {
            let t = IndexTransform::generator(g);
            let u = t.single_particle_unitary();
            let err = (&u * u.adjoint() - DMatrix::<Complex64>::identity(6, 6)).norm();
            assert!(err < 1e-12, "{g:?}: {err}");
        }
    }

    #[test]
    fn label_action_consistent_with_state_action() {
        for g in Generator::ALL {
            let t = IndexTransform::generator(g);
            for statistics in [Statistics::Boson, Statistics::Fermion] {
                for l in BellLabel::all(3).unwrap() {
                    let transformed = t.apply_state(&bell_state(l, statistics)).unwrap();
                    let target = bell_state(t.apply_label(l).unwrap(), statistics);
                    let overlap = target.inner_product(&transformed).unwrap();
                    assert!(
                        (overlap.norm() - 1.0).abs() < 1e-10,
                        "{g:?} on {l} ({statistics:?}): |overlap| = {}",
                        overlap.norm()
                    );
                }
            }
        }
    }

    #[test]
    fn t4_adds_global_phase_for_nonzero_p() {
        let t4 = IndexTransform::generator(Generator::T4);
        let l = label(1, 1);
        let transformed = t4.apply_state(&bell_state(l, Statistics::Boson)).unwrap();
        let target = bell_state(t4.apply_label(l).unwrap(), Statistics::Boson);
        let overlap = target.inner_product(&transformed).unwrap();
        let want = root_of_unity(3, 2); // e^{i4π/3}
        assert!((overlap - want).norm() < 1e-12);
    }

    #[test]
    fn twelve_winning_patterns() {
        let pats = winning_patterns();
        assert_eq!(pats.len(), 12);
        let unique: HashSet<u16> = pats.iter().copied().collect();
        assert_eq!(unique.len(), 12);
        assert!(pats.iter().all(|p| p.count_ones() == 3));
    }

    #[test]
    fn classify_known_sets() {
        let loser = BellSet::from_pairs(3, &[(0, 0), (0, 1), (2, 1), (2, 2)]).unwrap();
        assert_eq!(classify_tictactoe(&loser).unwrap(), TicTacToeClass::Loser);

        let winner = BellSet::from_pairs(3, &[(0, 2), (1, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(classify_tictactoe(&winner).unwrap(), TicTacToeClass::Winner);

        // winner that needs column permutation / wrap-around
        let wrap = BellSet::from_pairs(3, &[(0, 1), (1, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(classify_tictactoe(&wrap).unwrap(), TicTacToeClass::Winner);

        let second_loser = BellSet::from_pairs(3, &[(0, 0), (0, 2), (1, 1), (2, 1)]).unwrap();
        assert_eq!(classify_tictactoe(&second_loser).unwrap(), TicTacToeClass::Loser);

        let anti_winner =
            BellSet::from_pairs(3, &[(0, 0), (0, 2), (1, 1), (1, 2), (2, 0), (2, 1)]).unwrap();
        assert_eq!(classify_tictactoe(&anti_winner).unwrap(), TicTacToeClass::AntiWinner);

        let anti_loser =
            BellSet::from_pairs(3, &[(0, 2), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]).unwrap();
        assert_eq!(classify_tictactoe(&anti_loser).unwrap(), TicTacToeClass::AntiLoser);

        let triple = BellSet::from_pairs(3, &[(0, 0), (0, 1), (0, 2)]).unwrap();
        assert_eq!(classify_tictactoe(&triple), Err(Error::UnsupportedSetSize(3)));
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(enumerate_sets(4, 3).unwrap().len(), 126);
        assert_eq!(enumerate_sets(5, 3).unwrap().len(), 126);
        assert_eq!(enumerate_sets(6, 3).unwrap().len(), 84);
        assert_eq!(enumerate_sets(9, 3).unwrap().len(), 1);
        assert!(enumerate_sets(10, 3).is_err());
    }

    #[test]
    fn group_order_is_216() {
        assert_eq!(TransformGroup::qutrit().len(), 216);
    }

    #[test]
    fn orbits_of_four_sets() {
        let loser = BellSet::from_pairs(3, &[(0, 0), (0, 1), (2, 1), (2, 2)]).unwrap();
        let orb = orbit(&loser).unwrap();
        assert_eq!(orb.len(), 54);
        assert!(orb
            .iter()
            .all(|s| classify_tictactoe(s).unwrap() == TicTacToeClass::Loser));

        let winner = BellSet::from_pairs(3, &[(0, 2), (1, 1), (1, 2), (2, 0)]).unwrap();
        let orb = orbit(&winner).unwrap();
        assert_eq!(orb.len(), 72);
        assert!(orb
            .iter()
            .all(|s| classify_tictactoe(s).unwrap() == TicTacToeClass::Winner));
    }

    #[test]
    fn orbits_of_six_sets() {
        let anti_winner =
            BellSet::from_pairs(3, &[(0, 0), (0, 2), (1, 1), (1, 2), (2, 0), (2, 1)]).unwrap();
        assert_eq!(orbit(&anti_winner).unwrap().len(), 12);

        let anti_loser =
            BellSet::from_pairs(3, &[(0, 2), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]).unwrap();
        assert_eq!(orbit(&anti_loser).unwrap().len(), 72);
    }

    #[test]
    fn find_transform_identity_and_disjoint_classes() {
        let a = BellSet::from_pairs(3, &[(0, 2), (1, 1), (1, 2), (2, 0)]).unwrap();
        let t = find_transform(&a, &a).unwrap().unwrap();
        assert!(t.is_identity());

        let loser = BellSet::from_pairs(3, &[(0, 0), (0, 1), (2, 1), (2, 2)]).unwrap();
        assert!(find_transform(&loser, &a).unwrap().is_none());
    }

    #[test]
    fn find_transform_between_winners() {
        let a = BellSet::from_pairs(3, &[(0, 2), (1, 1), (1, 2), (2, 0)]).unwrap();
        let b = BellSet::from_pairs(3, &[(0, 1), (1, 0), (1, 1), (2, 2)]).unwrap();
        let t = find_transform(&a, &b).unwrap().expect("same class");
        assert_eq!(a.map(&t).unwrap(), b);
        assert!(!t.name().is_empty());
    }

    #[test]
    fn classification_is_orbit_invariant() {
        let sets = [
            BellSet::from_pairs(3, &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap(),
            BellSet::from_pairs(3, &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]).unwrap(),
        ];
        for set in sets {
            let class = classify_tictactoe(&set).unwrap();
            for t in TransformGroup::qutrit().elements() {
                let mapped = set.map(t).unwrap();
                assert_eq!(classify_tictactoe(&mapped).unwrap(), class);
            }
        }
    }

    #[test]
    fn bell_set_rejects_duplicates_and_mixed_dimension() {
        assert!(BellSet::from_pairs(3, &[(0, 0), (0, 0)]).is_err());
        let mixed = vec![
            BellLabel::new(3, 0, 0).unwrap(),
            BellLabel::new(2, 0, 0).unwrap(),
        ];
        assert!(BellSet::new(3, mixed).is_err());
    }
}
