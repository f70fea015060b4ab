// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Named experiments. Each produces tables, metrics and diagnostics in
//! memory; [`run`] writes them out with a manifest.

mod compare;
mod laser;
mod reservoir;
mod validate;

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde_json::Value;
use sqlaser::dynamics::Diagnostics;

use crate::config::{ScenarioConfig, ScenarioName};
use crate::output::{diagnostics_json, OutputDir, RunManifest, Table};
use crate::CliError;

pub use compare::DEFAULT_DIM as COMPARE_DEFAULT_DIM;
pub use laser::DEFAULT_DIM as LASER_DEFAULT_DIM;
pub use reservoir::DEFAULT_DIM as RESERVOIR_DEFAULT_DIM;
pub use validate::{DEFAULT_EFFECTIVE_DIM, DEFAULT_FULL_DIM};

#[derive(Debug, Clone)]
pub struct Outcome {
    pub tables: Vec<(String, Table)>,
    pub derived: BTreeMap<String, Value>,
    pub metrics: BTreeMap<String, Value>,
    pub truncation: BTreeMap<String, Value>,
    pub integrator: BTreeMap<String, Value>,
    pub diagnostics: Diagnostics,
    pub warnings: Vec<String>,
}

impl Default for Outcome {
    fn default() -> Self {
        Self {
            tables: Vec::new(),
            derived: BTreeMap::new(),
            metrics: BTreeMap::new(),
            truncation: BTreeMap::new(),
            integrator: BTreeMap::new(),
            diagnostics: Diagnostics {
                min_eigenvalue: f64::INFINITY,
                ..Diagnostics::default()
            },
            warnings: Vec::new(),
        }
    }
}

impl Outcome {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }
}

pub(crate) fn validate(cfg: &ScenarioConfig) -> Result<(), CliError> {
    match cfg.scenario_name()? {
        ScenarioName::ValidateEffective => validate::validate(cfg),
        ScenarioName::RunLaser => laser::validate(cfg),
        ScenarioName::CompareStates => compare::validate(cfg),
        ScenarioName::ReservoirBaseline => reservoir::validate(cfg),
    }
}

/// Runs the scenario named in `cfg` and enforces the truncation limit.
pub fn execute(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let out = match cfg.scenario_name()? {
        ScenarioName::ValidateEffective => validate::run(cfg)?,
        ScenarioName::RunLaser => laser::run(cfg)?,
        ScenarioName::CompareStates => compare::run(cfg)?,
        ScenarioName::ReservoirBaseline => reservoir::run(cfg)?,
    };
    let limit = cfg.truncation.tail_limit;
    if out.diagnostics.max_tail > limit {
        return Err(CliError::Numerical(sqlaser::Error::Truncation {
            tail: out.diagnostics.max_tail,
            limit,
            context: format!("scenario {}; raise truncation.dim", cfg.scenario_name()?),
        }));
    }
    Ok(out)
}

/// Executes `cfg` and writes its data files and `manifest.json` into `dir`.
pub fn run(cfg: &ScenarioConfig, dir: &Path) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let outcome = execute(cfg)?;
    let wall = start.elapsed().as_secs_f64();
    let mut files = OutputDir::create(dir)?;
    for (name, table) in &outcome.tables {
        files.write_table(name, table)?;
    }
    let manifest = RunManifest {
        artifact: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: cfg.scenario_name()?.to_string(),
        config_echo: cfg.to_toml(),
        derived: outcome.derived,
        metrics: outcome.metrics,
        truncation: outcome.truncation,
        integrator: outcome.integrator,
        diagnostics: diagnostics_json(&outcome.diagnostics),
        warnings: outcome.warnings,
        wall_clock_seconds: wall,
        files: Vec::new(),
    };
    files.finish(manifest)
}
