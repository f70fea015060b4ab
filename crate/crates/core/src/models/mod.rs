// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Hamiltonians and master-equation generators.
//!
//! Atom levels are indexed `g = 0`, `e = 1` and, for the three-level
//! model only, `i = 2`. Every generator acts on dense matrices through the
//! [`Generator`] trait so the integrators never need to know which model
//! they propagate.

mod generators;
mod hamiltonians;
mod lindblad;
mod params;

pub use generators::{
    atom_step_lindbladian, atom_step_rhs, engineered_reservoir, engineered_reservoir_rhs,
    laser_rhs, AtomStepGenerator, LaserGenerator,
};
pub use hamiltonians::{
    effective_hamiltonian, excitation_operator, sigma_minus, sigma_plus, FullHamiltonian,
    LEVEL_E, LEVEL_G, LEVEL_I,
};
pub use lindblad::{
    commutator_term, dissipator, superoperator, Generator, HamiltonianSource, Lindbladian,
};
pub use params::{
    EffectiveParams, EngineeredReservoirParams, LambdaFrequencies, LambdaSystemParams,
    LaserRateParams,
};
