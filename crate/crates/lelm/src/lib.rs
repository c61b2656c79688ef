//! Distinguishability limits for qudit Bell states under linear-evolution,
//! local-measurement (LELM) apparatuses.
//!
//! The crate provides, in rough order of dependency:
//!
//! - [`fock`]: single-particle modes, symmetrized two-particle states, qudit
//!   Bell states, detector modes, and the annihilation algebra.
//! - [`detector`]: the necessary single-detector orthogonality criteria,
//!   Bell-basis decomposition of detection signatures, and correlation-class
//!   censuses.
//! - [`orbits`]: the four channel-local equivalence transformations on qutrit
//!   Bell labels, tic-tac-toe classification of 4- and 6-state sets, and
//!   orbit computation under the generated group.
//! - [`forms`]: sesquilinear forms behind the criteria, plus the small exact
//!   (monomial-level) algebra used by the no-go verifiers.
//! - [`search`]: damped least-squares feasibility searches for detector-mode
//!   witnesses over candidate Bell sets, with seeded random restarts.
//! - [`povm`]: rank-1 Kraus operators, post-first-click residual states, and
//!   the analytic infeasibility certificates for generalized measurements.
//! - [`nogo`]: the elimination chain proving the projective bound for
//!   bosonic qutrit Bell states.
//! - [`report`]: machine-readable run reports and the command-line entry
//!   points.

pub mod detector;
pub mod error;
pub mod fock;
pub mod forms;
pub mod nogo;
pub mod orbits;
pub mod povm;
pub mod report;
pub mod search;

pub use error::{Error, Result};
