// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

use sqlaser::algebra::{generalized_vacuum, BogoliubovPair};
use sqlaser::dynamics::{
    evolve_lindblad, evolve_periodic, evolve_pure, liouvillian_steady_state, run_injection,
    InjectionSchedule, IntegratorConfig, Observer, Sampling,
};
use sqlaser::hilbert::{DensityMatrix, FockSpace, StateVector};
use sqlaser::models::{
    effective_hamiltonian, engineered_reservoir, EffectiveParams, EngineeredReservoirParams,
    FullHamiltonian, HamiltonianSource, LaserGenerator, LaserRateParams, LambdaSystemParams,
    LEVEL_E,
};
use sqlaser::observables::{mandel_q, mean_photon_number, photon_distribution};

fn tight() -> IntegratorConfig {
    IntegratorConfig {
        rel_tol: 1e-11,
        abs_tol: 1e-13,
        ..IntegratorConfig::default()
    }
}

fn space(d: usize) -> FockSpace {
    FockSpace::new(d).unwrap()
}

#[test]
fn kappa_zero_injection_is_nearly_poissonian() {
    // κ = 0 at the scenario's rates: an ordinary field stays close to
    // coherent statistics, with Q small and non-negative
    let pair = BogoliubovPair::new(0.0, space(20)).unwrap();
    let eff = EffectiveParams::new(1.0, 0.0).unwrap();
    let rho0 = DensityMatrix::from_pure(&StateVector::fock(pair.space(), 0).unwrap());
    let sched = InjectionSchedule::new(92.0, 920).unwrap();
    let run = run_injection(&sched, &eff, 0.35, 0.5, &pair, &rho0, &IntegratorConfig::default(), &[], "1/g")
        .unwrap();
    let rho = &run.evolution.final_state;
    let q = mandel_q(rho).unwrap();
    assert!((0.0..=0.2).contains(&q), "{q}");
    assert!(mean_photon_number(rho) > 0.0);
    // no squeezing without κ: the field stays diagonal
    assert!(rho.get(0, 2).norm() < 1e-12);
    assert!((rho.trace().re - 1.0).abs() <= 1e-7);
}

#[test]
fn rate_equation_agrees_with_atom_stream() {
    // matched rates A = g²/k and B = g⁴/(3k³) expand the per-atom step to
    // fourth order in gτ; γ = 0 keeps the atoms coherent
    let (kappa, k, c, d) = (0.3, 4.0, 0.2, 24);
    let pair = BogoliubovPair::new(kappa, space(d)).unwrap();
    let eff = EffectiveParams::new(1.0, kappa).unwrap();
    let rho0 = DensityMatrix::from_pure(&StateVector::fock(pair.space(), 0).unwrap());
    let sched = InjectionSchedule::new(k, (80.0 * k) as usize).unwrap();
    let run = run_injection(&sched, &eff, c, 0.0, &pair, &rho0, &IntegratorConfig::default(), &[], "1/g")
        .unwrap();
    let rates = LaserRateParams::from_rates(1.0 / k, 1.0 / (3.0 * k * k * k), c);
    let ss = liouvillian_steady_state(&LaserGenerator::new(rates, &pair), d).unwrap();
    let a = photon_distribution(&run.evolution.final_state);
    let b = photon_distribution(&ss);
    let tv = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>() / 2.0;
    assert!(tv <= 0.15, "{tv}");
    let (na, nb) = (mean_photon_number(&run.evolution.final_state), mean_photon_number(&ss));
    assert!((na - nb).abs() <= 0.15 * nb, "{na} {nb}");
}

#[test]
fn resonant_rabi_oscillation() {
    // κ = 0 reduces the effective interaction to Jaynes-Cummings
    let pair = BogoliubovPair::new(0.0, space(4)).unwrap();
    let eff = EffectiveParams::new(1.3, 0.0).unwrap();
    let h = effective_hamiltonian(&eff, &pair).unwrap();
    let psi0 = StateVector::basis(8, LEVEL_E * 4).unwrap();
    let obs = [Observer::new("sigma_ee", |psi: &StateVector| {
        (4..8).map(|k| psi.amplitude(k).norm_sqr()).sum()
    })];
    let sampling = Sampling::new(0.05, 5.0, "1/g").unwrap();
    let ev = evolve_pure(&h, &psi0, &sampling, &tight(), &obs).unwrap();
    for (t, v) in ev.series[0].rows() {
        assert!((v - (1.3 * t).cos().powi(2)).abs() < 1e-8, "t = {t}");
    }
    assert!(ev.diagnostics.max_norm_drift <= 1e-8);
}

#[test]
fn forward_then_backward_returns_home() {
    let pair = BogoliubovPair::new(0.6, space(12)).unwrap();
    let eff = EffectiveParams::new(1.0, 0.6).unwrap();
    let h = effective_hamiltonian(&eff, &pair).unwrap();
    let back = h.scale_real(-1.0);
    let psi0 = StateVector::basis(24, LEVEL_E * 12).unwrap();
    let sampling = Sampling::new(1.0, 4.0, "1/g").unwrap();
    let fwd = evolve_pure(&h, &psi0, &sampling, &tight(), &[]).unwrap();
    let rev = evolve_pure(&back, &fwd.final_state, &sampling, &tight(), &[]).unwrap();
    assert!(fwd.final_state.overlap(&psi0) < 0.9);
    assert!(rev.final_state.overlap(&psi0) >= 1.0 - 1e-7);
}

#[test]
fn stroboscopic_matches_direct_integration() {
    let params = LambdaSystemParams::validation_default();
    let full = FullHamiltonian::new(params, space(5)).unwrap();
    let period = full.period().unwrap();
    let cfg = IntegratorConfig {
        max_step: 0.05 / full.max_frequency(),
        ..tight()
    };
    let psi0 = StateVector::basis(15, LEVEL_E * 5).unwrap();
    let sampling = Sampling::new(period, 3.0 * period, "1/lambda").unwrap();
    let strob = evolve_periodic(&full, &psi0, &sampling, &cfg, &[]).unwrap();
    let direct = evolve_pure(&full, &psi0, &sampling, &cfg, &[]).unwrap();
    assert!((strob.final_time - direct.final_time).abs() < 1e-12);
    let f = strob.final_state.overlap(&direct.final_state);
    assert!(f >= 1.0 - 1e-9, "{f}");
    assert!(strob.diagnostics.max_unitarity_correction < 1e-9);
}

#[test]
fn reservoir_drives_a_mixture_into_the_dark_state() {
    let pair = BogoliubovPair::new(0.6, space(40)).unwrap();
    let res = EngineeredReservoirParams::new(1.0, 0.0).unwrap();
    let gen = engineered_reservoir(&res, &pair).unwrap();
    // thermal-like start with mean photon number 0.5
    let weights: Vec<f64> = (0..40).map(|n| (1.0 / 3.0) * (1.0f64 / 3.0).powi(n)).collect();
    let total: f64 = weights.iter().sum();
    let rho0 = DensityMatrix::from_diagonal(&weights.iter().map(|w| w / total).collect::<Vec<_>>()).unwrap();
    let vac = generalized_vacuum(&pair).unwrap();
    let sampling = Sampling::new(5.0, 40.0, "1/Gamma").unwrap();
    let ev = evolve_lindblad(&gen, &rho0, &sampling, &IntegratorConfig::default(), &[]).unwrap();
    let f = ev.final_state.fidelity_pure(&vac);
    assert!(f >= 1.0 - 1e-6, "{f}");
    assert!(ev.diagnostics.max_trace_drift <= 1e-8);
}

#[test]
fn reservoir_null_space_is_the_dark_state() {
    // κ = 0.3 keeps the dark state's weight beyond 24 levels near 1e-12
    let pair = BogoliubovPair::new(0.3, space(24)).unwrap();
    let res = EngineeredReservoirParams::new(1.0, 0.0).unwrap();
    let rho = liouvillian_steady_state(&engineered_reservoir(&res, &pair).unwrap(), 24).unwrap();
    let vac = generalized_vacuum(&pair).unwrap();
    let f = rho.fidelity_pure(&vac);
    assert!(f >= 1.0 - 1e-8, "{f}");
}
