// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Full three-level Hamiltonian against the effective two-level
//! interaction, both started in `|e⟩ ⊗ |0⟩`.

use serde_json::json;
use sqlaser::algebra::BogoliubovPair;
use sqlaser::dynamics::{
    evolve_periodic, evolve_pure, Evolution, IntegratorConfig, Observer, Sampling,
};
use sqlaser::hilbert::{partial_trace, DensityMatrix, FockSpace, StateVector, Subsystem};
use sqlaser::models::{
    effective_hamiltonian, EffectiveParams, FullHamiltonian, HamiltonianSource,
    LambdaSystemParams, LEVEL_E, LEVEL_I,
};
use sqlaser::observables::{mean_photon_number, quadrature_variances};

use super::Outcome;
use crate::config::ScenarioConfig;
use crate::output::{settings_json, finite, stats_json, Table};
use crate::CliError;

pub const DEFAULT_FULL_DIM: usize = 50;
pub const DEFAULT_EFFECTIVE_DIM: usize = 120;

/// Largest full-model step as a fraction of the fastest oscillation period
/// `1/max|frequency|`.
const STEP_FRACTION: f64 = 0.05;

const OBSERVABLES: [&str; 4] = ["var_x1", "var_x2", "photons", "sigma_ee"];

struct Plan {
    params: LambdaSystemParams,
    eff: EffectiveParams,
    /// Converts times in units of `1/λ` into units of `1/g`.
    g_axis: f64,
    full_dim: usize,
    eff_dim: usize,
    cfg: IntegratorConfig,
}

fn base_integrator() -> IntegratorConfig {
    IntegratorConfig {
        rel_tol: 1e-10,
        abs_tol: 1e-12,
        ..IntegratorConfig::default()
    }
}

fn plan(cfg: &ScenarioConfig) -> Result<Plan, CliError> {
    let params = cfg.lambda.params().map_err(CliError::config)?;
    let eff = params.effective().map_err(CliError::config)?;
    // with λ = 0 the coupling vanishes; keep the time axis of λ = 1
    let g_axis = if eff.g != 0.0 {
        eff.g.abs()
    } else {
        let unit = LambdaSystemParams {
            lambda_g: 1.0,
            lambda_e: 1.0,
            ..params
        };
        unit.coupling().abs()
    };
    if !(g_axis > 0.0 && g_axis.is_finite()) {
        return Err(CliError::Config(
            "the effective coupling vanishes even at unit λ; no time axis".into(),
        ));
    }
    let full_dim = cfg.truncation.dim.unwrap_or(DEFAULT_FULL_DIM);
    let eff_dim = cfg.truncation.effective_dim.unwrap_or(DEFAULT_EFFECTIVE_DIM);
    FockSpace::new(full_dim).map_err(CliError::config)?;
    FockSpace::new(eff_dim).map_err(CliError::config)?;
    Ok(Plan {
        params,
        eff,
        g_axis,
        full_dim,
        eff_dim,
        cfg: cfg.integrator.resolve(base_integrator())?,
    })
}

pub fn validate(cfg: &ScenarioConfig) -> Result<(), CliError> {
    plan(cfg).map(|_| ())
}

fn level_population(psi: &StateVector, level: usize, d: usize) -> f64 {
    let amps = psi.amplitudes();
    (level * d..(level + 1) * d).map(|k| amps[k].norm_sqr()).sum()
}

fn field_state(psi: &StateVector, levels: usize, d: usize) -> DensityMatrix {
    partial_trace(&DensityMatrix::from_pure(psi), (levels, d), Subsystem::Atom)
        .expect("dimensions match by construction")
}

fn observers<'a>(levels: usize, d: usize) -> Vec<Observer<'a, StateVector>> {
    let mut obs = vec![
        Observer::new("var_x1", move |psi: &StateVector| {
            quadrature_variances(&field_state(psi, levels, d)).0
        }),
        Observer::new("var_x2", move |psi: &StateVector| {
            quadrature_variances(&field_state(psi, levels, d)).1
        }),
        Observer::new("photons", move |psi: &StateVector| {
            mean_photon_number(&field_state(psi, levels, d))
        }),
        Observer::new("sigma_ee", move |psi: &StateVector| {
            level_population(psi, LEVEL_E, d)
        }),
    ];
    if levels == 3 {
        obs.push(Observer::new("sigma_ii", move |psi: &StateVector| {
            level_population(psi, LEVEL_I, d)
        }));
    }
    obs
}

fn column(ev: &Evolution<StateVector>, label: &str) -> Vec<f64> {
    ev.series(label)
        .expect("observer registered")
        .values()
        .collect()
}

pub fn run(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let p = plan(cfg)?;
    let full_space = FockSpace::new(p.full_dim)?;
    let eff_space = FockSpace::new(p.eff_dim)?;
    let full = FullHamiltonian::new(p.params, full_space)?;
    let mut full_cfg = p.cfg;
    if cfg.integrator.max_step.is_none() && full.max_frequency() > 0.0 {
        full_cfg.max_step = STEP_FRACTION / full.max_frequency();
    }

    // times in units of 1/λ
    let dt = cfg.sample.dt / p.g_axis;
    let t_end = cfg.sample.t_end / p.g_axis;
    let psi_full = StateVector::basis(3 * p.full_dim, LEVEL_E * p.full_dim)?;
    let obs_full = observers(3, p.full_dim);
    let (full_run, sampling) = match full.period() {
        Some(period) => {
            // sample both models on whole periods
            let per_sample = (dt / period).round().max(1.0);
            let step = per_sample * period;
            let n = (t_end / step + 1e-9).floor();
            let sampling = Sampling::new(step, n * step, "1/lambda")?;
            (evolve_periodic(&full, &psi_full, &sampling, &full_cfg, &obs_full)?, sampling)
        }
        None => {
            let sampling = Sampling::new(dt, t_end, "1/lambda")?;
            (evolve_pure(&full, &psi_full, &sampling, &full_cfg, &obs_full)?, sampling)
        }
    };

    let pair = BogoliubovPair::new(p.eff.kappa, eff_space)?;
    let heff = effective_hamiltonian(&p.eff, &pair)?;
    let psi_eff = StateVector::basis(2 * p.eff_dim, LEVEL_E * p.eff_dim)?;
    let eff_run = evolve_pure(&heff, &psi_eff, &sampling, &p.cfg, &observers(2, p.eff_dim))?;

    let times: Vec<f64> = full_run.series[0].times().collect();
    let eff_times: Vec<f64> = eff_run.series[0].times().collect();
    let rows = times.len().min(eff_times.len());
    if let Some(k) = (0..rows).find(|&k| (times[k] - eff_times[k]).abs() > 1e-9 * times[k].max(1.0)) {
        return Err(CliError::Numerical(sqlaser::Error::Series {
            label: "validation grid".into(),
            reason: format!("sample {k} at {} vs {}", times[k], eff_times[k]),
        }));
    }

    let mut headers = vec!["t_in_g_units".to_string(), "t_in_lambda_units".to_string()];
    for o in OBSERVABLES {
        headers.push(format!("{o}_full"));
        headers.push(format!("{o}_effective"));
    }
    headers.push("sigma_ii_full".into());
    let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    let mut table = Table::new(&header_refs);
    let cols_full: Vec<Vec<f64>> = OBSERVABLES.iter().map(|o| column(&full_run, o)).collect();
    let cols_eff: Vec<Vec<f64>> = OBSERVABLES.iter().map(|o| column(&eff_run, o)).collect();
    let sigma_ii = column(&full_run, "sigma_ii");
    for k in 0..rows {
        let mut row = vec![Some(times[k] * p.g_axis), Some(times[k])];
        for (f, e) in cols_full.iter().zip(&cols_eff) {
            row.push(Some(f[k]));
            row.push(Some(e[k]));
        }
        row.push(Some(sigma_ii[k]));
        table.push(row);
    }

    let mut out = Outcome::default();
    for (i, o) in OBSERVABLES.iter().enumerate() {
        for horizon in [5.0, 7.0, 10.0] {
            let worst = (0..rows)
                .filter(|&k| times[k] * p.g_axis <= horizon + 1e-9)
                .map(|k| (cols_full[i][k] - cols_eff[i][k]).abs())
                .fold(0.0, f64::max);
            out.metrics
                .insert(format!("max_abs_diff_{o}_gt_le_{horizon}"), json!(worst));
        }
    }
    let max_photons = cols_full[2].iter().chain(&cols_eff[2]).copied().fold(0.0, f64::max);
    out.metrics.insert("max_photons".into(), json!(max_photons));
    out.metrics
        .insert("max_sigma_ii_full".into(), json!(sigma_ii.iter().copied().fold(0.0, f64::max)));
    out.warnings = p.params.regime_warnings(max_photons);

    out.derived.insert("g".into(), json!(p.eff.g));
    out.derived.insert("g_time_axis".into(), json!(p.g_axis));
    out.derived.insert("kappa".into(), json!(p.eff.kappa));
    out.derived.insert("r".into(), json!(p.eff.squeeze_parameter()));
    out.derived
        .insert("period_in_lambda_units".into(), json!(full.period().map(finite)));
    out.derived
        .insert("sample_dt_in_lambda_units".into(), json!(sampling.dt));
    out.derived
        .insert("sample_dt_in_g_units".into(), json!(sampling.dt * p.g_axis));

    out.truncation.insert("full_dim".into(), json!(p.full_dim));
    out.truncation.insert("effective_dim".into(), json!(p.eff_dim));
    out.truncation
        .insert("max_tail_full".into(), json!(full_run.diagnostics.max_tail));
    out.truncation
        .insert("max_tail_effective".into(), json!(eff_run.diagnostics.max_tail));

    out.integrator.insert("full".into(), stats_json(&full_run.stats));
    out.integrator.insert("effective".into(), stats_json(&eff_run.stats));
    out.integrator.insert("full_settings".into(), settings_json(&full_cfg));
    out.integrator.insert("effective_settings".into(), settings_json(&p.cfg));

    out.diagnostics = full_run.diagnostics;
    out.diagnostics.merge(&eff_run.diagnostics);
    out.tables.push(("validation.csv".into(), table));
    Ok(out)
}
