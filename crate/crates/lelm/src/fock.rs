//! Single-particle modes, symmetrized two-particle states, qudit Bell states,
//! and detection-mode algebra.
//!
//! Two identical particles enter a measurement device through separate input
//! channels, left and right, each carrying a d-valued variable. The
//! single-particle space therefore has dimension 2d, with the basis ordered
//! so that φ_{2s} = |s,L⟩ and φ_{2s+1} = |s,R⟩. Two-particle states are
//! stored as full (2d)×(2d) amplitude grids over ordered pairs of basis kets
//! and carry an explicit exchange-statistics flag: bosonic grids are
//! symmetric, fermionic grids antisymmetric.
//!
//! The Bell state in correlation class `c` and phase class `p` pairs value j
//! on the left with j+c (mod d) on the right, with relative phase factors
//! e^{i2πpj/d} across the terms:
//!
//! ```text
//! |Ψ_c^p⟩ = (2d)^{-1/2} Σ_j e^{i2πpj/d} ( |j,L⟩|j+c,R⟩ ± |j+c,R⟩|j,L⟩ )
//! ```
//!
//! A detector mode is a superposition over the 2d single-particle basis kets;
//! its coefficient vector ν doubles as the coefficients of the detection
//! annihilation operator ĉ = Σ_m ν_m â_m. Every quantity derived here (gram
//! values, signatures, censuses) is invariant under the ν ↔ ν* identification,
//! so a single vector serves both roles.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Magnitude below which a coefficient is treated as a structural zero.
pub const MODE_ZERO_THRESHOLD: f64 = 1e-9;

/// Tolerance for unit-norm and exchange-symmetry checks.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// e^{2πik/d}.
pub(crate) fn root_of_unity(d: usize, k: i64) -> Complex64 {
    let t = 2.0 * std::f64::consts::PI * (k.rem_euclid(d as i64) as f64) / d as f64;
    Complex64::new(t.cos(), t.sin())
}

/// Input channel of a single particle.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Channel {
    Left,
    Right,
}

impl Channel {
    pub fn other(self) -> Channel {
        match self {
            Channel::Left => Channel::Right,
            Channel::Right => Channel::Left,
        }
    }
}

/// Exchange statistics of the identical pair.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    /// +1 for bosons, −1 for fermions.
    pub fn exchange_sign(self) -> f64 {
        match self {
            Statistics::Boson => 1.0,
            Statistics::Fermion => -1.0,
        }
    }
}

impl std::fmt::Display for Statistics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Statistics::Boson => write!(f, "boson"),
            Statistics::Fermion => write!(f, "fermion"),
        }
    }
}

/// A single-particle basis ket, addressable either by flat index m in [0, 2d)
/// or by (value, channel) with m = 2s for |s,L⟩ and m = 2s+1 for |s,R⟩.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SingleParticleMode {
    d: usize,
    index: usize,
}

impl SingleParticleMode {
    pub fn new(value: usize, channel: Channel, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if value >= d {
            return Err(Error::ValueOutOfRange { value, d });
        }
        let index = match channel {
            Channel::Left => 2 * value,
            Channel::Right => 2 * value + 1,
        };
        Ok(Self { d, index })
    }

    pub fn from_index(index: usize, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if index >= 2 * d {
            return Err(Error::IndexOutOfRange { index, d });
        }
        Ok(Self { d, index })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn value(&self) -> usize {
        self.index / 2
    }

    pub fn channel(&self) -> Channel {
        if self.index % 2 == 0 {
            Channel::Left
        } else {
            Channel::Right
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

/// Index triple (d, c, p) naming the Bell state |Ψ_c^p⟩.
///
/// Ordering is c-major then p, which fixes the canonical ordering of Bell
/// sets everywhere downstream.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BellLabel {
    d: usize,
    c: usize,
    p: usize,
}

impl BellLabel {
    pub fn new(d: usize, c: usize, p: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if c >= d || p >= d {
            return Err(Error::LabelOutOfRange { c, p, d });
        }
        Ok(Self { d, c, p })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Flat index c·d + p into the canonical label ordering.
    pub fn flat_index(&self) -> usize {
        self.c * self.d + self.p
    }

    /// All d² labels in canonical order.
    pub fn all(d: usize) -> Result<Vec<BellLabel>> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        Ok((0..d)
            .flat_map(|c| (0..d).map(move |p| BellLabel { d, c, p }))
            .collect())
    }
}

impl std::fmt::Display for BellLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Psi({},{})", self.c, self.p)
    }
}

/// A two-particle state over the 2d-dimensional single-particle basis,
/// stored as the full grid A with A[m][n] the amplitude of |φ_m⟩₁|φ_n⟩₂.
///
/// Exchange symmetry A[n][m] = ±A[m][n] is enforced at construction.
#[derive(Clone, Debug)]
pub struct TwoParticleState {
    d: usize,
    statistics: Statistics,
    amp: DMatrix<Complex64>,
}

impl TwoParticleState {
    /// Wraps an amplitude grid, checking shape and exchange symmetry.
    pub fn from_grid(d: usize, statistics: Statistics, amp: DMatrix<Complex64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if amp.nrows() != 2 * d || amp.ncols() != 2 * d {
            return Err(Error::BadVectorLength {
                got: amp.nrows(),
                expected: 2 * d,
            });
        }
        let state = Self { d, statistics, amp };
        if state.exchange_symmetry_error() > NORM_TOLERANCE {
            return Err(Error::BrokenExchangeSymmetry(statistics));
        }
        Ok(state)
    }

    pub fn zero(d: usize, statistics: Statistics) -> Self {
        Self {
            d,
            statistics,
            amp: DMatrix::zeros(2 * d, 2 * d),
        }
    }

    /// The symmetrized Bell state |Ψ_c^p⟩ for the given statistics.
    pub fn bell(label: BellLabel, statistics: Statistics) -> Self {
        let d = label.d();
        let mut amp = DMatrix::zeros(2 * d, 2 * d);
        let norm = Complex64::new(1.0 / (2.0 * d as f64).sqrt(), 0.0);
        let sign = Complex64::new(statistics.exchange_sign(), 0.0);
        for j in 0..d {
            let m = 2 * j;
            let n = 2 * ((j + label.c()) % d) + 1;
            let v = norm * root_of_unity(d, (label.p() * j) as i64);
            amp[(m, n)] += v;
            amp[(n, m)] += sign * v;
        }
        Self { d, statistics, amp }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn grid(&self) -> &DMatrix<Complex64> {
        &self.amp
    }

    pub fn amplitude(&self, m: usize, n: usize) -> Complex64 {
        self.amp[(m, n)]
    }

    /// Σ conj(A_self)·A_other over all grid entries.
    pub fn inner_product(&self, other: &TwoParticleState) -> Result<Complex64> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(self.d, other.d));
        }
        if self.statistics != other.statistics {
            return Err(Error::StatisticsMismatch);
        }
        Ok(self
            .amp
            .iter()
            .zip(other.amp.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOLERANCE
    }

    /// Rescales to unit norm; zero states are returned unchanged.
    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.amp /= Complex64::new(n, 0.0);
        }
        self
    }

    /// Largest violation of A[n][m] = ±A[m][n] over the grid.
    pub fn exchange_symmetry_error(&self) -> f64 {
        let sign = self.statistics.exchange_sign();
        let mut worst: f64 = 0.0;
        for m in 0..2 * self.d {
            for n in 0..2 * self.d {
                let res = (self.amp[(n, m)] - sign * self.amp[(m, n)]).norm();
                worst = worst.max(res);
            }
        }
        worst
    }

    /// True when all amplitude sits on cross-channel entries (one particle in
    /// each input channel).
    pub fn in_cross_channel_sector(&self, tol: f64) -> bool {
        for m in 0..2 * self.d {
            for n in 0..2 * self.d {
                if m % 2 == n % 2 && self.amp[(m, n)].norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Coefficient of the normalized symmetrized joint-particle ket pairing
    /// left value `s` with right value `t`. Equals √2·A[2s][2t+1].
    pub fn joint_ket_amplitude(&self, s: usize, t: usize) -> Complex64 {
        Complex64::new(std::f64::consts::SQRT_2, 0.0) * self.amp[(2 * s, 2 * t + 1)]
    }
}

/// Shorthand for [`TwoParticleState::bell`].
pub fn bell_state(label: BellLabel, statistics: Statistics) -> TwoParticleState {
    TwoParticleState::bell(label, statistics)
}

/// A detector mode: complex coefficient vector ν of length 2d over the
/// single-particle basis. Serves both as the mode ket and as the coefficients
/// of the detection annihilation operator ĉ = Σ_m ν_m â_m.
#[derive(Clone, Debug, PartialEq)]
pub struct DetectorMode {
    d: usize,
    nu: DVector<Complex64>,
}

impl DetectorMode {
    pub fn new(d: usize, nu: DVector<Complex64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if nu.len() != 2 * d {
            return Err(Error::BadVectorLength {
                got: nu.len(),
                expected: 2 * d,
            });
        }
        Ok(Self { d, nu })
    }

    /// The pure basis mode |s,channel⟩.
    pub fn basis(mode: SingleParticleMode) -> Self {
        let mut nu = DVector::zeros(2 * mode.d());
        nu[mode.index()] = Complex64::new(1.0, 0.0);
        Self { d: mode.d(), nu }
    }

    /// Builds a mode from (value, channel, coefficient) terms; unlisted kets
    /// get coefficient zero.
    pub fn from_kets(d: usize, kets: &[(usize, Channel, Complex64)]) -> Result<Self> {
        let mut nu = DVector::zeros(2 * d);
        for &(value, channel, coeff) in kets {
            let m = SingleParticleMode::new(value, channel, d)?;
            nu[m.index()] += coeff;
        }
        Self::new(d, nu)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn nu(&self) -> &DVector<Complex64> {
        &self.nu
    }

    pub fn coefficient(&self, index: usize) -> Complex64 {
        self.nu[index]
    }

    pub fn norm(&self) -> f64 {
        self.nu.norm()
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.nu /= Complex64::new(n, 0.0);
        }
        self
    }

    /// Number of kets present, i.e. coefficients above [`MODE_ZERO_THRESHOLD`].
    pub fn ket_count(&self) -> usize {
        self.nu
            .iter()
            .filter(|v| v.norm() > MODE_ZERO_THRESHOLD)
            .count()
    }

    /// (left kets, right kets) present in the mode.
    pub fn channel_profile(&self) -> (usize, usize) {
        let mut left = 0;
        let mut right = 0;
        for (m, v) in self.nu.iter().enumerate() {
            if v.norm() > MODE_ZERO_THRESHOLD {
                if m % 2 == 0 {
                    left += 1;
                } else {
                    right += 1;
                }
            }
        }
        (left, right)
    }

    /// True when every present ket lives in one channel.
    pub fn is_single_channel(&self) -> bool {
        let (l, r) = self.channel_profile();
        l == 0 || r == 0
    }
}

/// Applies the detection annihilation operator ĉ = Σ_m ν_m â_m to a
/// two-particle state, returning the remaining single-particle state as a
/// (generally unnormalized) coefficient vector over the φ basis.
///
/// With the grid convention used here the ladder algebra reduces to
/// ĉ|Ψ⟩ = √2 Σ_m ν_m Σ_n A[m][n] |φ_n⟩ for both statistics, so e.g.
/// annihilating |0,L⟩ from the d=2 bosonic state |Ψ_0^0⟩ leaves
/// (1/√2)|0,R⟩.
pub fn annihilate(mode: &DetectorMode, state: &TwoParticleState) -> Result<DVector<Complex64>> {
    if mode.d() != state.d() {
        return Err(Error::DimensionMismatch(mode.d(), state.d()));
    }
    let dim = 2 * state.d();
    let mut out = DVector::zeros(dim);
    for m in 0..dim {
        let w = mode.nu[m];
        if w == Complex64::ZERO {
            continue;
        }
        for n in 0..dim {
            out[n] += w * state.amp[(m, n)];
        }
    }
    Ok(out * Complex64::new(std::f64::consts::SQRT_2, 0.0))
}

/// The two-click detection signature for modes `i` and `j`: their tensor
/// product projected onto the one-left/one-right sector, symmetrized per the
/// statistics and normalized. Returns `None` when the projection is null
/// (e.g. both modes live entirely in one channel).
pub fn detection_signature(
    i: &DetectorMode,
    j: &DetectorMode,
    statistics: Statistics,
) -> Result<Option<TwoParticleState>> {
    if i.d() != j.d() {
        return Err(Error::DimensionMismatch(i.d(), j.d()));
    }
    let d = i.d();
    let dim = 2 * d;
    let sign = Complex64::new(statistics.exchange_sign(), 0.0);
    let mut amp = DMatrix::zeros(dim, dim);
    for m in 0..dim {
        for n in 0..dim {
            if m % 2 == n % 2 {
                continue; // same-channel entries are projected out
            }
            amp[(m, n)] = i.nu[m] * j.nu[n] + sign * j.nu[m] * i.nu[n];
        }
    }
    let norm = amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm <= MODE_ZERO_THRESHOLD {
        return Ok(None);
    }
    amp /= Complex64::new(norm, 0.0);
    Ok(Some(TwoParticleState {
        d,
        statistics,
        amp,
    }))
}
