// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Squeezed-vacuum laser simulation on a truncated Fock space.
//!
//! The crate is organised bottom-up:
//!
//! - [`hilbert`]: dense operators, states, tensor products and the usual
//!   quantum-optics operator zoo (ladder, displacement, squeeze).
//! - [`algebra`]: the Bogoliubov pair `A = (a + κa†)/√(1−κ²)`, its
//!   generalized number basis and generalized coherent states.
//! - [`models`]: the three-level Lambda Hamiltonian, the effective bilinear
//!   interaction, the laser master equation, the per-atom injection step and
//!   the engineered-reservoir baseline.
//! - [`dynamics`]: adaptive integrators, sequential atom injection and
//!   steady-state detection.
//! - [`observables`]: excitations, quadratures, photon statistics,
//!   fidelities, Wigner functions and coherences.
//!
//! Joint atom-field spaces always use the atom-major convention: the basis
//! state `|atom = s⟩ ⊗ |n⟩` sits at index `s * d_field + n`.

pub mod algebra;
pub mod dynamics;
mod error;
pub mod hilbert;
pub mod models;
pub mod observables;

pub use error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
