// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Time evolution: pure states under (possibly periodic) Hamiltonians,
//! density matrices under Lindblad generators, sequential atom injection,
//! and steady-state detection.

mod evolve;
mod injection;
mod integrator;
mod series;
mod steady;

pub use evolve::{
    evolve_lindblad, evolve_periodic, evolve_pure, period_propagator, Diagnostics, Evolution,
    Observer, Sampling, POSITIVITY_LIMIT,
};
pub use injection::{run_injection, InjectionRun, InjectionSchedule};
pub use integrator::{IntegratorConfig, IntegratorStats, Stepper};
pub use series::TimeSeries;
pub use steady::{
    detect_steady_state, liouvillian_steady_state, SteadyState, SUPEROPERATOR_DIM_LIMIT,
};
