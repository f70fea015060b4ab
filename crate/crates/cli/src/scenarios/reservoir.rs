// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Engineered-reservoir baseline: `(Γ/2)D[A] + (Γ̃/2)D[a]` relaxed from the
//! Fock vacuum, fidelity to `|0⟩_A` swept over `Γ̃/Γ`. Times are in units
//! of `1/Γ`.

use serde_json::json;
use sqlaser::algebra::{generalized_vacuum, BogoliubovPair};
use sqlaser::dynamics::{
    detect_steady_state, evolve_lindblad, IntegratorConfig, IntegratorStats, Observer, Sampling,
};
use sqlaser::hilbert::{DensityMatrix, FockSpace, StateVector};
use sqlaser::models::{engineered_reservoir, EngineeredReservoirParams};
use sqlaser::observables::mean_photon_number;

use super::Outcome;
use crate::config::ScenarioConfig;
use crate::output::{settings_json, stats_json, Table};
use crate::CliError;

pub const DEFAULT_DIM: usize = 40;

struct Plan {
    pair: BogoliubovPair,
    params: Vec<(f64, EngineeredReservoirParams)>,
    cfg: IntegratorConfig,
}

fn plan(cfg: &ScenarioConfig) -> Result<Plan, CliError> {
    let res = &cfg.reservoir;
    let dim = cfg.truncation.dim.unwrap_or(DEFAULT_DIM);
    let space = FockSpace::new(dim).map_err(CliError::config)?;
    let pair = BogoliubovPair::new(res.kappa, space).map_err(CliError::config)?;
    if res.ratios.is_empty() {
        return Err(CliError::Config("reservoir.ratios is empty".into()));
    }
    if !(res.t_end > 0.0 && res.t_end.is_finite()) {
        return Err(CliError::Config("reservoir.t_end must be positive".into()));
    }
    let params = res
        .ratios
        .iter()
        .map(|&x| {
            EngineeredReservoirParams::new(res.gamma_big, x * res.gamma_big)
                .map(|p| (x, p))
                .map_err(CliError::config)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Plan {
        pair,
        params,
        cfg: cfg.integrator.resolve(IntegratorConfig::default())?,
    })
}

pub fn validate(cfg: &ScenarioConfig) -> Result<(), CliError> {
    plan(cfg).map(|_| ())
}

pub fn run(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let p = plan(cfg)?;
    let res = &cfg.reservoir;
    let target = generalized_vacuum(&p.pair)?;
    let rho0 = DensityMatrix::from_pure(&StateVector::fock(p.pair.space(), 0)?);
    // one sample per unit of 1/Γ is enough to see the plateau
    let sampling = Sampling::new(1.0 / res.gamma_big, res.t_end / res.gamma_big, "1/Gamma")?;
    let observers = [
        Observer::new("fidelity", |rho: &DensityMatrix| rho.fidelity_pure(&target)),
        Observer::new("photons", mean_photon_number),
    ];

    let mut out = Outcome::default();
    let mut table = Table::new(&["ratio", "fidelity", "one_minus_fidelity", "photons", "final_change"]);
    let mut stats = IntegratorStats::default();
    let mut fids = Vec::new();
    let mut warned = false;
    for &(ratio, params) in &p.params {
        if !params.in_regime() && !warned {
            out.warnings
                .push(format!("residual decay ratio {ratio} is outside the Γ̃ ≪ Γ regime"));
            warned = true;
        }
        let generator = engineered_reservoir(&params, &p.pair)?;
        let ev = evolve_lindblad(&generator, &rho0, &sampling, &p.cfg, &observers)?;
        let fid = ev.series("fidelity").expect("registered");
        let (_, f) = fid.last().expect("at least one sample");
        let n = ev.series("photons").expect("registered").last().expect("sample").1;
        let steady = detect_steady_state(fid, 1.0 / res.gamma_big, 1e-9).ok();
        let change = steady.map(|s| s.final_spread);
        table.push(vec![Some(ratio), Some(f), Some(1.0 - f), Some(n), change]);
        fids.push((ratio, f));
        stats.merge(&ev.stats);
        out.diagnostics.merge(&ev.diagnostics);
    }
    let mut sorted = fids.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let decreasing = sorted.windows(2).all(|w| w[1].1 < w[0].1);
    out.metrics.insert("fidelities".into(), json!(fids));
    out.metrics.insert("strictly_decreasing".into(), json!(decreasing));
    if let Some(&(x, f)) = fids.iter().find(|(x, _)| *x > 0.0 && (*x - 0.05).abs() < 1e-12) {
        out.metrics
            .insert("infidelity_per_ratio_at_0.05".into(), json!((1.0 - f) / x));
    }
    out.derived.insert("kappa".into(), json!(p.pair.kappa()));
    out.derived.insert("r".into(), json!(p.pair.squeeze_parameter()));
    out.derived.insert("gamma_big".into(), json!(res.gamma_big));
    out.truncation.insert("dim".into(), json!(p.pair.space().dim()));
    out.truncation.insert("max_tail".into(), json!(out.diagnostics.max_tail));
    out.integrator.insert("lindblad".into(), stats_json(&stats));
    out.integrator.insert("settings".into(), settings_json(&p.cfg));
    out.tables.push(("reservoir.csv".into(), table));
    Ok(out)
}
