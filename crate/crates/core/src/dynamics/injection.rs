// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

use faer::MatRef;

use super::evolve::{inspect, Diagnostics, Evolution, Observer, Recorder};
use super::integrator::{IntegratorConfig, Stepper};
use crate::algebra::BogoliubovPair;
use crate::hilbert::{partial_trace, DensityMatrix, Subsystem};
use crate::models::{AtomStepGenerator, EffectiveParams, Generator, LEVEL_E, LEVEL_G};
use crate::{Error, Result, C64};

/// Deterministic sequence of atoms crossing the cavity one after another,
/// each interacting for `1/k`.
#[derive(Debug, Clone, PartialEq)]
pub struct InjectionSchedule {
    atom_rate_k: f64,
    total_atoms: usize,
    atom_state: DensityMatrix,
    record_every: usize,
}

impl InjectionSchedule {
    /// Every atom enters in `|e⟩`.
    pub fn new(atom_rate_k: f64, total_atoms: usize) -> Result<Self> {
        Self::with_excitation(atom_rate_k, total_atoms, 1.0)
    }

    /// Atoms enter in `p|e⟩⟨e| + (1−p)|g⟩⟨g|`.
    pub fn with_excitation(atom_rate_k: f64, total_atoms: usize, p: f64) -> Result<Self> {
        if !(atom_rate_k > 0.0 && atom_rate_k.is_finite()) {
            return Err(Error::UnphysicalParameter(format!(
                "atom rate k = {atom_rate_k} must be positive"
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::UnphysicalParameter(format!(
                "excitation probability p = {p} outside [0, 1]"
            )));
        }
        let mut w = [0.0; 2];
        w[LEVEL_E] = p;
        w[LEVEL_G] = 1.0 - p;
        Ok(Self {
            atom_rate_k,
            total_atoms,
            atom_state: DensityMatrix::from_diagonal(&w)?,
            record_every: 1,
        })
    }

    /// Samples observers after every `n`-th atom (and after the last one).
    pub fn record_every(mut self, n: usize) -> Self {
        self.record_every = n.max(1);
        self
    }

    pub fn atom_rate_k(&self) -> f64 {
        self.atom_rate_k
    }

    pub fn total_atoms(&self) -> usize {
        self.total_atoms
    }

    pub fn atom_state(&self) -> &DensityMatrix {
        &self.atom_state
    }

    pub fn interaction_time(&self) -> f64 {
        1.0 / self.atom_rate_k
    }

    /// Number of atoms needed to cover `t_end`.
    pub fn atoms_for(atom_rate_k: f64, t_end: f64) -> usize {
        (atom_rate_k * t_end - 1e-9).ceil().max(0.0) as usize
    }
}

/// Result of an injection run; `excitations_deposited` is the summed drop
/// of `⟨σ_ee⟩` across all atoms, logged for bookkeeping only.
#[derive(Debug, Clone)]
pub struct InjectionRun {
    pub evolution: Evolution<DensityMatrix>,
    pub excitations_deposited: f64,
    pub max_joint_trace_drift: f64,
}

/// Sends `total_atoms` atoms through the cavity. For every atom the joint
/// state `ρ_atom ⊗ ρ_field` evolves under the per-atom step generator for
/// `1/k`, after which the atom is traced out. Sample `i` is taken at time
/// `i/k` after `i` atoms.
#[allow(clippy::too_many_arguments)]
pub fn run_injection(
    schedule: &InjectionSchedule,
    eff: &EffectiveParams,
    loss_c: f64,
    gamma: f64,
    pair: &BogoliubovPair,
    rho_field0: &DensityMatrix,
    cfg: &IntegratorConfig,
    observers: &[Observer<'_, DensityMatrix>],
    units: &str,
) -> Result<InjectionRun> {
    let generator = AtomStepGenerator::new(eff, loss_c, gamma, pair)?;
    let d = generator.field_dim();
    if rho_field0.dim() != d {
        return Err(Error::InvalidShape(format!(
            "field state of dimension {} with a {d}-level truncation",
            rho_field0.dim()
        )));
    }
    let tau = schedule.interaction_time();
    let rhs = |_t: f64, y: MatRef<'_, C64>| generator.apply(y);
    let mut stepper = Stepper::new(rhs, *cfg)?;
    let mut rec = Recorder::new(observers, units);
    let mut diag = Diagnostics {
        min_eigenvalue: f64::INFINITY,
        ..Diagnostics::default()
    };
    let trace0 = rho_field0.trace().re;
    let atom_e = schedule.atom_state().get(LEVEL_E, LEVEL_E).re;
    let mut field = rho_field0.clone();
    let mut deposited = 0.0;
    let mut joint_drift = 0.0f64;
    let mut herm = 0.0f64;
    inspect(&field, 0.0, trace0, &mut diag)?;
    rec.record(0.0, &field, observers)?;
    for i in 1..=schedule.total_atoms() {
        let joint = schedule.atom_state().tensor(&field);
        let tr_in = joint.trace().re;
        stepper.invalidate();
        let out = stepper.advance(0.0, joint.into_mat(), tau, |_| {})?;
        let mut joint = DensityMatrix::from_mat_unchecked(out)?;
        joint_drift = joint_drift.max((joint.trace().re - tr_in).abs());
        let atom = partial_trace(&joint, (2, d), Subsystem::Field)?;
        deposited += atom_e - atom.get(LEVEL_E, LEVEL_E).re;
        herm = herm.max(joint.symmetrize());
        field = partial_trace(&joint, (2, d), Subsystem::Atom)?;
        if i % schedule.record_every == 0 || i == schedule.total_atoms() {
            let t = i as f64 * tau;
            inspect(&field, t, trace0, &mut diag)?;
            rec.record(t, &field, observers)?;
        }
    }
    diag.max_hermiticity_drift = herm;
    log::debug!(
        "injection: {} atoms, {deposited:.4} excitations left the atoms, joint trace drift {joint_drift:.2e}",
        schedule.total_atoms()
    );
    Ok(InjectionRun {
        evolution: Evolution {
            series: rec.series,
            final_state: field,
            final_time: schedule.total_atoms() as f64 * tau,
            stats: stepper.stats,
            diagnostics: diag,
        },
        excitations_deposited: deposited,
        max_joint_trace_drift: joint_drift,
    })
}
