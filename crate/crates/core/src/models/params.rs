// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::algebra::squeeze_parameter;
use crate::{Error, Result};

/// Relative tolerance used when checking the Lambda-system parameter
/// relations.
const RELATION_TOL: f64 = 1e-9;

/// Minimum ratio accepted as "much larger" by the regime checks.
const REGIME_RATIO: f64 = 10.0;

/// Couplings and detunings of the three-level Lambda atom in a cavity.
///
/// Detunings follow the sign conventions
///
/// ```text
/// Δ_g  = ω_i − ω          Δ_e  = ω₀ + ω − ω_i
/// δ_g1 = ω_g1 − ω_i       δ_g2 = ω_i − ω_g2
/// δ_e1 = ω_i − ω₀ − ω_e1  δ_e2 = ω₀ + ω_e2 − ω_i
/// ```
///
/// so that only the detunings enter the interaction-picture Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSystemParams {
    pub lambda_g: f64,
    pub lambda_e: f64,
    pub rabi_g1: f64,
    pub rabi_g2: f64,
    pub rabi_e1: f64,
    pub rabi_e2: f64,
    pub delta_g1: f64,
    pub delta_g2: f64,
    pub delta_e1: f64,
    pub delta_e2: f64,
    pub cavity_delta_g: f64,
    pub cavity_delta_e: f64,
}

/// Bare frequencies from which the detunings can be derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaFrequencies {
    pub omega: f64,
    pub omega_0: f64,
    pub omega_i: f64,
    pub omega_g1: f64,
    pub omega_g2: f64,
    pub omega_e1: f64,
    pub omega_e2: f64,
}

impl LambdaFrequencies {
    /// `(δ_g1, δ_g2, δ_e1, δ_e2, Δ_g, Δ_e)`.
    pub fn detunings(&self) -> [f64; 6] {
        [
            self.omega_g1 - self.omega_i,
            self.omega_i - self.omega_g2,
            self.omega_i - self.omega_0 - self.omega_e1,
            self.omega_0 + self.omega_e2 - self.omega_i,
            self.omega_i - self.omega,
            self.omega_0 + self.omega - self.omega_i,
        ]
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= RELATION_TOL * a.abs().max(b.abs()).max(1.0)
}

impl LambdaSystemParams {
    /// Fills every field from `λ`, `Ω_g1`, `δ_g1` and `δ_e1` through the
    /// parameter relations.
    pub fn from_primary(lambda: f64, rabi: f64, delta_g1: f64, delta_e1: f64) -> Result<Self> {
        let p = Self {
            lambda_g: lambda,
            lambda_e: lambda,
            rabi_g1: rabi,
            rabi_g2: rabi,
            rabi_e1: -rabi,
            rabi_e2: -rabi,
            delta_g1,
            delta_g2: delta_g1,
            delta_e1,
            delta_e2: delta_e1,
            cavity_delta_g: delta_e1,
            cavity_delta_e: delta_g1,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters used for the effective-Hamiltonian validation run, in
    /// units of `λ`.
    pub fn validation_default() -> Self {
        Self::from_primary(1.0, 40.0, 1000.0, 600.0).expect("default parameters are consistent")
    }

    /// Checks every parameter relation and the sign of `κ`.
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.lambda_g,
            self.lambda_e,
            self.rabi_g1,
            self.rabi_g2,
            self.rabi_e1,
            self.rabi_e2,
            self.delta_g1,
            self.delta_g2,
            self.delta_e1,
            self.delta_e2,
            self.cavity_delta_g,
            self.cavity_delta_e,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::NumericDomain("Lambda-system parameters"));
        }
        let checks: [(&'static str, f64, f64); 8] = [
            ("lambda_g = lambda_e", self.lambda_g, self.lambda_e),
            ("Omega_g1 = Omega_g2", self.rabi_g1, self.rabi_g2),
            ("Omega_g1 = -Omega_e1", self.rabi_g1, -self.rabi_e1),
            ("Omega_g1 = -Omega_e2", self.rabi_g1, -self.rabi_e2),
            ("delta_g1 = delta_g2", self.delta_g1, self.delta_g2),
            ("delta_e1 = delta_e2", self.delta_e1, self.delta_e2),
            ("Delta_g = delta_e1", self.cavity_delta_g, self.delta_e1),
            ("Delta_e = delta_g1", self.cavity_delta_e, self.delta_g1),
        ];
        for (relation, lhs, rhs) in checks {
            if !close(lhs, rhs) {
                return Err(Error::Constraint {
                    relation,
                    detail: format!("{lhs} vs {rhs}"),
                });
            }
        }
        if self.delta_g1 == 0.0 {
            return Err(Error::Constraint {
                relation: "delta_g1 != 0",
                detail: "kappa = delta_e1/delta_g1 is undefined".into(),
            });
        }
        let kappa = self.delta_e1 / self.delta_g1;
        if !(0.0..1.0).contains(&kappa) {
            return Err(Error::Constraint {
                relation: "0 <= kappa = delta_e1/delta_g1 < 1",
                detail: format!("kappa = {kappa}"),
            });
        }
        Ok(())
    }

    /// Builds the parameters from bare frequencies plus couplings.
    pub fn from_frequencies(
        freqs: &LambdaFrequencies,
        lambda: f64,
        rabi: f64,
    ) -> Result<Self> {
        let [delta_g1, delta_g2, delta_e1, delta_e2, cavity_delta_g, cavity_delta_e] =
            freqs.detunings();
        let p = Self {
            lambda_g: lambda,
            lambda_e: lambda,
            rabi_g1: rabi,
            rabi_g2: rabi,
            rabi_e1: -rabi,
            rabi_e2: -rabi,
            delta_g1,
            delta_g2,
            delta_e1,
            delta_e2,
            cavity_delta_g,
            cavity_delta_e,
        };
        p.validate()?;
        Ok(p)
    }

    /// `κ = δ_e1/δ_g1`.
    pub fn kappa(&self) -> f64 {
        self.delta_e1 / self.delta_g1
    }

    /// `g = √(1−κ²) λ Ω_g1 / δ_e1`.
    pub fn coupling(&self) -> f64 {
        let kappa = self.kappa();
        (1.0 - kappa * kappa).sqrt() * self.lambda_g * self.rabi_g1 / self.delta_e1
    }

    pub fn effective(&self) -> Result<EffectiveParams> {
        self.validate()?;
        EffectiveParams::new(self.coupling(), self.kappa())
    }

    /// Violations of `δ ≫ Ω ≫ n̄λ`, as human-readable messages. Each one is
    /// also logged as a warning.
    pub fn regime_warnings(&self, mean_photons: f64) -> Vec<String> {
        let mut out = Vec::new();
        let delta = self.delta_g1.abs().min(self.delta_e1.abs());
        let rabi = self.rabi_g1.abs();
        let field = mean_photons.max(1.0) * self.lambda_g.abs();
        if delta < REGIME_RATIO * rabi {
            out.push(format!(
                "detuning {delta} is not much larger than drive strength {rabi}"
            ));
        }
        if rabi < REGIME_RATIO * field {
            out.push(format!(
                "drive strength {rabi} is not much larger than n̄λ = {field}"
            ));
        }
        for msg in &out {
            log::warn!("effective-Hamiltonian regime: {msg}");
        }
        out
    }
}

/// Parameters of the effective interaction `g(Aσ₊ + A†σ₋)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParams {
    pub g: f64,
    pub kappa: f64,
}

impl EffectiveParams {
    pub fn new(g: f64, kappa: f64) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::NumericDomain("effective coupling"));
        }
        squeeze_parameter(kappa)?;
        Ok(Self { g, kappa })
    }

    /// Squeeze parameter `r = atanh κ` of the target state.
    pub fn squeeze_parameter(&self) -> f64 {
        self.kappa.atanh()
    }
}

/// Rates of the laser master equation together with the pumping data they
/// are derived from. All rates share the unit of `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserRateParams {
    pub gain_a: f64,
    pub saturation_b: f64,
    pub loss_c: f64,
    pub pump_r: f64,
    pub injection_k: f64,
    pub excite_p: f64,
    pub gamma: f64,
    pub quality_q: Option<f64>,
}

impl LaserRateParams {
    /// Derives `A = 2R(g/γ)²` and `B = 4A(g/γ)²` from the pumping rate
    /// `R = Kp`. `injection_k` defaults to `R/p`.
    pub fn from_pump(
        pump_r: f64,
        excite_p: f64,
        gamma: f64,
        loss_c: f64,
        g: f64,
        injection_k: Option<f64>,
    ) -> Result<Self> {
        for (name, v) in [("pump_r", pump_r), ("gamma", gamma), ("loss_c", loss_c)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::UnphysicalParameter(format!(
                    "{name} = {v} must be finite and non-negative"
                )));
            }
        }
        if gamma == 0.0 {
            return Err(Error::UnphysicalParameter(
                "gamma = 0 makes the gain coefficient diverge".into(),
            ));
        }
        if !(excite_p > 0.0 && excite_p <= 1.0) {
            return Err(Error::UnphysicalParameter(format!(
                "excite_p = {excite_p} outside (0, 1]"
            )));
        }
        let injection_k = injection_k.unwrap_or(pump_r / excite_p);
        if !(injection_k.is_finite() && injection_k > 0.0) {
            return Err(Error::UnphysicalParameter(format!(
                "injection_k = {injection_k} must be positive"
            )));
        }
        let ratio = (g / gamma).powi(2);
        let gain_a = 2.0 * pump_r * ratio;
        Ok(Self {
            gain_a,
            saturation_b: 4.0 * gain_a * ratio,
            loss_c,
            pump_r,
            injection_k,
            excite_p,
            gamma,
            quality_q: None,
        })
    }

    /// Rates set directly, with no pumping data attached.
    pub fn from_rates(gain_a: f64, saturation_b: f64, loss_c: f64) -> Self {
        Self {
            gain_a,
            saturation_b,
            loss_c,
            pump_r: 0.0,
            injection_k: 0.0,
            excite_p: 1.0,
            gamma: 0.0,
            quality_q: None,
        }
    }

    /// `k·p`, the rate of excited atoms, which is what `R` stands for.
    pub fn excited_rate(&self) -> f64 {
        self.injection_k * self.excite_p
    }
}

/// Rates of the engineered-reservoir master equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineeredReservoirParams {
    pub gamma_big: f64,
    pub gamma_tilde: f64,
}

impl EngineeredReservoirParams {
    pub fn new(gamma_big: f64, gamma_tilde: f64) -> Result<Self> {
        if !(gamma_big.is_finite() && gamma_big > 0.0) {
            return Err(Error::UnphysicalParameter(format!(
                "engineered rate {gamma_big} must be positive"
            )));
        }
        if !(gamma_tilde.is_finite() && gamma_tilde >= 0.0) {
            return Err(Error::UnphysicalParameter(format!(
                "residual decay rate {gamma_tilde} must be non-negative"
            )));
        }
        Ok(Self {
            gamma_big,
            gamma_tilde,
        })
    }

    /// `Γ̃/Γ ≤ 0.1`, the range in which the residual loss is a small
    /// perturbation of the engineered channel.
    pub fn in_regime(&self) -> bool {
        self.gamma_tilde <= 0.1 * self.gamma_big
    }
}
