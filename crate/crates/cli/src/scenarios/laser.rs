// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Field built up by a stream of atoms crossing the cavity one at a time,
//! starting from the Fock vacuum. Rates and times are in units of `g`.

use serde_json::{json, Value};
use sqlaser::algebra::BogoliubovPair;
use sqlaser::dynamics::{
    detect_steady_state, run_injection, InjectionSchedule, IntegratorConfig, Observer, TimeSeries,
};
use sqlaser::hilbert::{DensityMatrix, FockSpace, StateVector};
use sqlaser::models::{EffectiveParams, LaserRateParams};
use sqlaser::observables::{
    mandel_q_sample, mean_photon_number, photon_distribution, quadrature_variances,
    squeezed_vacuum, wigner,
};

use super::Outcome;
use crate::config::ScenarioConfig;
use crate::output::{settings_json, stats_json, wigner_table, Table};
use crate::CliError;

pub const DEFAULT_DIM: usize = 60;

const COLUMNS: [&str; 5] = ["photons", "var_x1", "var_x2", "mandel_q", "fidelity"];

struct Plan {
    dim: usize,
    pair: BogoliubovPair,
    eff: EffectiveParams,
    rates: LaserRateParams,
    schedule: InjectionSchedule,
    record_every: usize,
    cfg: IntegratorConfig,
    pairs: Vec<(usize, usize)>,
}

fn plan(cfg: &ScenarioConfig) -> Result<Plan, CliError> {
    let l = &cfg.laser;
    let dim = cfg.truncation.dim.unwrap_or(DEFAULT_DIM);
    let space = FockSpace::new(dim).map_err(CliError::config)?;
    let pair = BogoliubovPair::new(l.kappa, space).map_err(CliError::config)?;
    let eff = EffectiveParams::new(1.0, l.kappa).map_err(CliError::config)?;
    let rates = LaserRateParams::from_pump(l.pump_r, l.excite_p, l.gamma, l.loss_c, 1.0, l.injection_k)
        .map_err(CliError::config)?;
    let k = rates.injection_k;
    let total = l
        .total_atoms
        .unwrap_or_else(|| InjectionSchedule::atoms_for(k, cfg.sample.t_end));
    let record_every = ((cfg.sample.dt * k).round() as usize).max(1);
    let schedule = InjectionSchedule::with_excitation(k, total, l.excite_p)
        .map_err(CliError::config)?
        .record_every(record_every);
    let pairs: Vec<(usize, usize)> = l.coherence_pairs.iter().map(|p| (p[0], p[1])).collect();
    if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i.max(j) >= dim) {
        return Err(CliError::Config(format!(
            "coherence pair ({i}, {j}) outside a {dim}-dimensional truncation"
        )));
    }
    Ok(Plan {
        dim,
        pair,
        eff,
        rates,
        schedule,
        record_every,
        cfg: cfg.integrator.resolve(IntegratorConfig::default())?,
        pairs,
    })
}

pub fn validate(cfg: &ScenarioConfig) -> Result<(), CliError> {
    plan(cfg).map(|_| ())
}

fn coherence_label(i: usize, j: usize) -> String {
    format!("abs_rho_{i}_{j}")
}

fn steady_json(series: &TimeSeries, window: f64, eps: f64) -> Value {
    match detect_steady_state(series, window, eps) {
        Ok(s) => json!({
            "reached": s.reached,
            "t_steady": s.t_steady,
            "final_mean": s.final_mean,
            "final_spread": s.final_spread,
        }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

/// `(max − min)/mean` of a series over `[t0, t1]`.
fn drift_json(series: &TimeSeries, t0: f64, t1: f64) -> Value {
    let vals: Vec<f64> = series.window(t0 - 1e-9, t1 + 1e-9).map(|(_, v)| v).collect();
    if vals.is_empty() {
        return Value::Null;
    }
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let rel = (mean > 0.0).then(|| (hi - lo) / mean);
    json!({ "min": lo, "max": hi, "mean": mean, "relative_drift": rel })
}

pub fn run(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let p = plan(cfg)?;
    let space = p.pair.space();
    let r = p.eff.squeeze_parameter();
    let target = squeezed_vacuum(space, r)?;
    let mut observers = vec![
        Observer::new("photons", mean_photon_number),
        Observer::new("var_x1", |rho: &DensityMatrix| quadrature_variances(rho).0),
        Observer::new("var_x2", |rho: &DensityMatrix| quadrature_variances(rho).1),
        Observer::partial("mandel_q", mandel_q_sample),
        Observer::new("fidelity", |rho: &DensityMatrix| rho.fidelity_pure(&target)),
    ];
    for &(i, j) in &p.pairs {
        observers.push(Observer::new(coherence_label(i, j), move |rho: &DensityMatrix| {
            rho.get(i, j).norm()
        }));
    }
    let rho0 = DensityMatrix::from_pure(&StateVector::fock(space, 0)?);
    let run = run_injection(
        &p.schedule,
        &p.eff,
        p.rates.loss_c,
        p.rates.gamma,
        &p.pair,
        &rho0,
        &p.cfg,
        &observers,
        "1/g",
    )?;
    let ev = &run.evolution;

    let mut headers: Vec<String> = vec!["t_in_g_units".into()];
    headers.extend(COLUMNS.iter().map(|c| c.to_string()));
    headers.extend(p.pairs.iter().map(|&(i, j)| coherence_label(i, j)));
    let series: Vec<&TimeSeries> = headers[1..]
        .iter()
        .map(|h| ev.series(h).expect("observer registered"))
        .collect();
    let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    let mut table = Table::new(&header_refs);
    for t in series[0].times() {
        let mut row = vec![Some(t)];
        // partial observers skip samples, so match rows by time
        row.extend(
            series
                .iter()
                .map(|s| s.rows().iter().find(|(ts, _)| *ts == t).map(|&(_, v)| v)),
        );
        table.push(row);
    }

    let final_rho = &ev.final_state;
    let mut dist = Table::new(&["n", "p_n"]);
    for (n, pn) in photon_distribution(final_rho).into_iter().enumerate() {
        dist.push(vec![Some(n as f64), Some(pn)]);
    }
    let grid = wigner(final_rho, &cfg.wigner.spec()?)?;

    let mut out = Outcome::default();
    let (window, eps) = (cfg.steady.window, cfg.steady.eps);
    let [d0, d1] = cfg.steady.drift_window;
    for s in &series {
        out.metrics
            .insert(format!("steady_{}", s.label()), steady_json(s, window, eps));
        out.metrics
            .insert(format!("final_{}", s.label()), json!(s.last().map(|r| r.1)));
        out.metrics
            .insert(format!("initial_{}", s.label()), json!(s.first().map(|r| r.1)));
    }
    for &(i, j) in &p.pairs {
        let label = coherence_label(i, j);
        let s = ev.series(&label).expect("observer registered");
        out.metrics.insert(format!("drift_{label}"), drift_json(s, d0, d1));
    }
    out.metrics.insert("drift_window".into(), json!([d0, d1]));
    out.metrics.insert("wigner_integral".into(), json!(grid.integral()));
    out.metrics
        .insert("excitations_deposited".into(), json!(run.excitations_deposited));
    out.metrics
        .insert("max_joint_trace_drift".into(), json!(run.max_joint_trace_drift));

    out.derived.insert("g".into(), json!(1.0));
    out.derived.insert("kappa".into(), json!(p.eff.kappa));
    out.derived.insert("r".into(), json!(r));
    out.derived.insert("mandel_q_target".into(), json!((2.0 * r).cosh()));
    out.derived.insert("fidelity_vacuum".into(), json!(1.0 / r.cosh()));
    out.derived.insert("gain_a".into(), json!(p.rates.gain_a));
    out.derived.insert("saturation_b".into(), json!(p.rates.saturation_b));
    out.derived.insert("loss_c".into(), json!(p.rates.loss_c));
    out.derived.insert("pump_r".into(), json!(p.rates.pump_r));
    out.derived.insert("injection_k".into(), json!(p.rates.injection_k));
    out.derived.insert("excite_p".into(), json!(p.rates.excite_p));
    out.derived
        .insert("atom_count".into(), json!(p.schedule.total_atoms()));
    out.derived
        .insert("interaction_time".into(), json!(p.schedule.interaction_time()));
    out.derived.insert("record_every_atoms".into(), json!(p.record_every));
    out.derived.insert("final_time".into(), json!(ev.final_time));

    out.truncation.insert("dim".into(), json!(p.dim));
    out.truncation.insert("max_tail".into(), json!(ev.diagnostics.max_tail));
    out.integrator.insert("injection".into(), stats_json(&ev.stats));
    out.integrator.insert("settings".into(), settings_json(&p.cfg));
    out.diagnostics = ev.diagnostics;

    out.tables.push(("laser.csv".into(), table));
    out.tables.push(("photon_distribution.csv".into(), dist));
    out.tables.push(("wigner.csv".into(), wigner_table(&grid)));
    Ok(out)
}
