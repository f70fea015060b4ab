// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Generalized coherent state `|α⟩_A` next to the squeezed vacuum
//! `S(atanh κ)|0⟩`.

use serde_json::json;
use sqlaser::algebra::{generalized_coherent, BogoliubovPair};
use sqlaser::hilbert::{DensityMatrix, FockSpace};
use sqlaser::observables::{
    mandel_q, mean_photon_number, photon_distribution, quadrature_variances, squeezed_vacuum,
    wigner,
};
use sqlaser::C64;

use super::Outcome;
use crate::config::ScenarioConfig;
use crate::output::{wigner_table, Table};
use crate::CliError;

pub const DEFAULT_DIM: usize = 60;

fn pair(cfg: &ScenarioConfig) -> Result<BogoliubovPair, CliError> {
    let dim = cfg.truncation.dim.unwrap_or(DEFAULT_DIM);
    let space = FockSpace::new(dim).map_err(CliError::config)?;
    let a = &cfg.compare;
    if !(a.alpha_re.is_finite() && a.alpha_im.is_finite()) {
        return Err(CliError::Config("compare.alpha must be finite".into()));
    }
    BogoliubovPair::new(a.kappa, space).map_err(CliError::config)
}

pub fn validate(cfg: &ScenarioConfig) -> Result<(), CliError> {
    pair(cfg).map(|_| ())
}

pub fn run(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let pair = pair(cfg)?;
    let alpha = C64::new(cfg.compare.alpha_re, cfg.compare.alpha_im);
    let r = pair.squeeze_parameter();
    let coherent = generalized_coherent(&pair, alpha)?;
    let squeezed = squeezed_vacuum(pair.space(), r)?;
    let fidelity = coherent.overlap(&squeezed);
    let spec = cfg.wigner.spec()?;

    let mut out = Outcome::default();
    let mut dist = Table::new(&["n", "p_generalized_coherent", "p_squeezed_vacuum"]);
    let states = [
        ("generalized_coherent", DensityMatrix::from_pure(&coherent)),
        ("squeezed_vacuum", DensityMatrix::from_pure(&squeezed)),
    ];
    let pops: Vec<Vec<f64>> = states.iter().map(|(_, rho)| photon_distribution(rho)).collect();
    for (n, (p, q)) in pops[0].iter().zip(&pops[1]).enumerate() {
        dist.push(vec![Some(n as f64), Some(*p), Some(*q)]);
    }
    out.tables.push(("photon_distribution.csv".into(), dist));
    let mut tail = 0.0f64;
    for (name, rho) in &states {
        let grid = wigner(rho, &spec)?;
        let (v1, v2) = quadrature_variances(rho);
        out.metrics.insert(format!("photons_{name}"), json!(mean_photon_number(rho)));
        out.metrics.insert(format!("var_x1_{name}"), json!(v1));
        out.metrics.insert(format!("var_x2_{name}"), json!(v2));
        out.metrics.insert(format!("mandel_q_{name}"), json!(mandel_q(rho).ok()));
        out.metrics.insert(format!("wigner_integral_{name}"), json!(grid.integral()));
        tail = tail.max(rho.tail_population());
        out.tables.push((format!("wigner_{name}.csv"), wigner_table(&grid)));
    }
    out.metrics.insert("fidelity".into(), json!(fidelity));

    out.derived.insert("kappa".into(), json!(pair.kappa()));
    out.derived.insert("r".into(), json!(r));
    out.derived.insert("alpha".into(), json!([alpha.re, alpha.im]));
    out.truncation.insert("dim".into(), json!(pair.space().dim()));
    out.truncation.insert("max_tail".into(), json!(tail));
    out.diagnostics.max_tail = tail;
    out.diagnostics.min_eigenvalue = 0.0;
    Ok(out)
}
