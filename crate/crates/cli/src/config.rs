// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scenario configuration: TOML with one table per section, every key
//! optional, unknown keys rejected.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sqlaser::dynamics::IntegratorConfig;
use sqlaser::models::LambdaSystemParams;
use sqlaser::observables::WignerSpec;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioName {
    ValidateEffective,
    RunLaser,
    CompareStates,
    ReservoirBaseline,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 4] = [
        Self::ValidateEffective,
        Self::RunLaser,
        Self::CompareStates,
        Self::ReservoirBaseline,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ValidateEffective => "validate-effective",
            Self::RunLaser => "run-laser",
            Self::CompareStates => "compare-states",
            Self::ReservoirBaseline => "reservoir-baseline",
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub scenario: Option<ScenarioName>,
    pub lambda: LambdaSection,
    pub laser: LaserSection,
    pub compare: CompareSection,
    pub reservoir: ReservoirSection,
    pub truncation: TruncationSection,
    pub integrator: IntegratorSection,
    pub sample: SampleSection,
    pub wigner: WignerSection,
    pub steady: SteadySection,
    pub output: OutputSection,
}

/// Lambda-system couplings in units of `λ`. The four primary keys fill
/// every field through the parameter relations; any field may then be
/// overridden explicitly and the relations are re-checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LambdaSection {
    pub lambda: f64,
    pub rabi: f64,
    pub delta_g1: f64,
    pub delta_e1: f64,
    pub lambda_g: Option<f64>,
    pub lambda_e: Option<f64>,
    pub rabi_g1: Option<f64>,
    pub rabi_g2: Option<f64>,
    pub rabi_e1: Option<f64>,
    pub rabi_e2: Option<f64>,
    pub delta_g2: Option<f64>,
    pub delta_e2: Option<f64>,
    pub cavity_delta_g: Option<f64>,
    pub cavity_delta_e: Option<f64>,
}

impl Default for LambdaSection {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            rabi: 40.0,
            delta_g1: 1000.0,
            delta_e1: 600.0,
            lambda_g: None,
            lambda_e: None,
            rabi_g1: None,
            rabi_g2: None,
            rabi_e1: None,
            rabi_e2: None,
            delta_g2: None,
            delta_e2: None,
            cavity_delta_g: None,
            cavity_delta_e: None,
        }
    }
}

impl LambdaSection {
    pub fn params(&self) -> sqlaser::Result<LambdaSystemParams> {
        let base = LambdaSystemParams {
            lambda_g: self.lambda,
            lambda_e: self.lambda,
            rabi_g1: self.rabi,
            rabi_g2: self.rabi,
            rabi_e1: -self.rabi,
            rabi_e2: -self.rabi,
            delta_g1: self.delta_g1,
            delta_g2: self.delta_g1,
            delta_e1: self.delta_e1,
            delta_e2: self.delta_e1,
            cavity_delta_g: self.delta_e1,
            cavity_delta_e: self.delta_g1,
        };
        let p = LambdaSystemParams {
            lambda_g: self.lambda_g.unwrap_or(base.lambda_g),
            lambda_e: self.lambda_e.unwrap_or(base.lambda_e),
            rabi_g1: self.rabi_g1.unwrap_or(base.rabi_g1),
            rabi_g2: self.rabi_g2.unwrap_or(base.rabi_g2),
            rabi_e1: self.rabi_e1.unwrap_or(base.rabi_e1),
            rabi_e2: self.rabi_e2.unwrap_or(base.rabi_e2),
            delta_g1: self.delta_g1,
            delta_g2: self.delta_g2.unwrap_or(base.delta_g2),
            delta_e1: self.delta_e1,
            delta_e2: self.delta_e2.unwrap_or(base.delta_e2),
            cavity_delta_g: self.cavity_delta_g.unwrap_or(base.cavity_delta_g),
            cavity_delta_e: self.cavity_delta_e.unwrap_or(base.cavity_delta_e),
        };
        p.validate()?;
        Ok(p)
    }
}

/// Laser rates in units of `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LaserSection {
    pub kappa: f64,
    pub loss_c: f64,
    pub pump_r: f64,
    pub gamma: f64,
    pub excite_p: f64,
    /// Atoms per unit time; defaults to `pump_r / excite_p`.
    pub injection_k: Option<f64>,
    /// Defaults to enough atoms to cover `sample.t_end`.
    pub total_atoms: Option<usize>,
    pub coherence_pairs: Vec<[usize; 2]>,
}

impl Default for LaserSection {
    fn default() -> Self {
        Self {
            kappa: 0.6,
            loss_c: 0.35,
            pump_r: 92.0,
            gamma: 0.5,
            excite_p: 1.0,
            injection_k: None,
            total_atoms: None,
            coherence_pairs: vec![[0, 8], [4, 6]],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareSection {
    pub kappa: f64,
    pub alpha_re: f64,
    pub alpha_im: f64,
}

impl Default for CompareSection {
    fn default() -> Self {
        Self {
            kappa: 0.6,
            alpha_re: 0.18,
            alpha_im: 0.0,
        }
    }
}

/// Rates in units of the engineered rate `Γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReservoirSection {
    pub kappa: f64,
    pub gamma_big: f64,
    /// Values of `Γ̃/Γ` to sweep.
    pub ratios: Vec<f64>,
    /// Relaxation time, in units of `1/Γ`.
    pub t_end: f64,
}

impl Default for ReservoirSection {
    fn default() -> Self {
        Self {
            kappa: 0.6,
            gamma_big: 1.0,
            ratios: vec![0.0, 0.01, 0.05, 0.1],
            t_end: 30.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TruncationSection {
    /// Field dimension; the default depends on the scenario.
    pub dim: Option<usize>,
    /// Field dimension of the effective model in `validate-effective`.
    pub effective_dim: Option<usize>,
    /// Runs fail when the top-decile population exceeds this.
    pub tail_limit: f64,
}

impl Default for TruncationSection {
    fn default() -> Self {
        Self {
            dim: None,
            effective_dim: None,
            tail_limit: sqlaser::hilbert::TAIL_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSection {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_step: Option<f64>,
    pub min_step: Option<f64>,
    pub fixed_step: Option<f64>,
}

impl IntegratorSection {
    /// Fills unset keys from `base` and validates the result.
    pub fn resolve(&self, base: IntegratorConfig) -> Result<IntegratorConfig, CliError> {
        let cfg = IntegratorConfig {
            rel_tol: self.rel_tol.unwrap_or(base.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(base.abs_tol),
            max_step: self.max_step.unwrap_or(base.max_step),
            min_step: self.min_step.unwrap_or(base.min_step),
            fixed_step: self.fixed_step.or(base.fixed_step),
        };
        cfg.validate().map_err(CliError::config)?;
        Ok(cfg)
    }
}

/// Output grid in units of `g` (validation and laser) or `1/Γ`
/// (reservoir).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleSection {
    pub dt: f64,
    pub t_end: f64,
}

impl Default for SampleSection {
    fn default() -> Self {
        Self {
            dt: 0.05,
            t_end: 10.0,
        }
    }
}

impl SampleSection {
    fn validate(&self) -> Result<(), CliError> {
        if !(self.dt > 0.0 && self.dt.is_finite() && self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(CliError::Config(format!(
                "sample grid dt = {}, t_end = {} is invalid",
                self.dt, self.t_end
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WignerSection {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub points: usize,
}

impl Default for WignerSection {
    fn default() -> Self {
        let s = WignerSpec::default();
        Self {
            x_min: s.x_min,
            x_max: s.x_max,
            p_min: s.p_min,
            p_max: s.p_max,
            points: s.points,
        }
    }
}

impl WignerSection {
    pub fn spec(&self) -> Result<WignerSpec, CliError> {
        let s = WignerSpec {
            x_min: self.x_min,
            x_max: self.x_max,
            p_min: self.p_min,
            p_max: self.p_max,
            points: self.points,
        };
        s.validate().map_err(CliError::config)?;
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SteadySection {
    pub window: f64,
    pub eps: f64,
    /// Interval over which coherence drift is measured.
    pub drift_window: [f64; 2],
}

impl Default for SteadySection {
    fn default() -> Self {
        Self {
            window: 1.0,
            eps: 0.02,
            drift_window: [3.0, 7.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: Option<String>,
}

fn set_dotted(table: &mut toml::Table, key: &str, value: toml::Value) -> Result<(), CliError> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("malformed key '{key}'")));
    }
    let (last, path) = parts.split_last().expect("split yields at least one part");
    let mut cur = table;
    for part in path {
        let entry = cur
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = match entry {
            toml::Value::Table(t) => t,
            _ => return Err(CliError::Config(format!("'{part}' in '{key}' is not a section"))),
        };
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

/// Parses `key=value`; the value is read as a TOML literal, falling back
/// to a bare string.
fn parse_override(assignment: &str) -> Result<(String, toml::Value), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override '{assignment}' is not key=value")))?;
    let raw = raw.trim();
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("parsed key present"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    Ok((key.trim().to_string(), value))
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        Self::from_parts(text, &[])
    }

    /// Parses `text`, applies `key=value` overrides, and deserialises.
    pub fn from_parts(text: &str, overrides: &[String]) -> Result<Self, CliError> {
        let mut table: toml::Table =
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        for o in overrides {
            let (k, v) = parse_override(o)?;
            set_dotted(&mut table, &k, v)?;
        }
        toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))
    }

    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, CliError> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?,
            None => String::new(),
        };
        Self::from_parts(&text, overrides)
    }

    /// Pins the scenario name, rejecting a file written for another one.
    pub fn for_scenario(mut self, name: ScenarioName) -> Result<Self, CliError> {
        match self.scenario {
            Some(s) if s != name => Err(CliError::Config(format!(
                "config is for scenario '{s}', not '{name}'"
            ))),
            _ => {
                self.scenario = Some(name);
                Ok(self)
            }
        }
    }

    pub fn scenario_name(&self) -> Result<ScenarioName, CliError> {
        self.scenario
            .ok_or_else(|| CliError::Config("config does not name a scenario".into()))
    }

    /// Runs every parameter check the named scenario depends on.
    pub fn validate(&self) -> Result<(), CliError> {
        self.sample.validate()?;
        self.wigner.spec()?;
        if self.truncation.tail_limit.is_nan() || self.truncation.tail_limit <= 0.0 {
            return Err(CliError::Config("truncation.tail_limit must be positive".into()));
        }
        if !(self.steady.window > 0.0 && self.steady.eps > 0.0) {
            return Err(CliError::Config("steady.window and steady.eps must be positive".into()));
        }
        crate::scenarios::validate(self)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }
}
