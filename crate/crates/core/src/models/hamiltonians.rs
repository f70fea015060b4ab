// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::TAU;

use faer::Mat;

use super::lindblad::HamiltonianSource;
use super::params::{EffectiveParams, LambdaSystemParams};
use crate::algebra::BogoliubovPair;
use crate::hilbert::{annihilation, atom_transition, identity, tensor, FockSpace, Operator};
use crate::{Error, Result, C64};

/// Atomic level indices. The effective model keeps `G` and `E` only.
pub const LEVEL_G: usize = 0;
pub const LEVEL_E: usize = 1;
pub const LEVEL_I: usize = 2;

/// One term `c · e^{iνt} · T` of the interaction-picture Hamiltonian; its
/// Hermitian conjugate is added implicitly.
#[derive(Debug, Clone)]
struct Term {
    coeff: f64,
    freq: f64,
    op: Mat<C64>,
}

/// Interaction-picture Hamiltonian of the Lambda atom (levels `g`, `e`,
/// `i`) coupled to the cavity mode and four classical drives:
///
/// ```text
/// H̃(t) = λ_g a σ_ig e^{iΔ_g t} + λ_e a σ_ie e^{−iΔ_e t}
///       + Ω_g1 σ_ig e^{−iδ_g1 t} + Ω_g2 σ_ig e^{iδ_g2 t}
///       + Ω_e1 σ_ie e^{iδ_e1 t}  + Ω_e2 σ_ie e^{−iδ_e2 t} + h.c.
/// ```
///
/// All drive phases vanish at `t = 0`.
#[derive(Debug, Clone)]
pub struct FullHamiltonian {
    params: LambdaSystemParams,
    field: FockSpace,
    terms: Vec<Term>,
}

impl FullHamiltonian {
    pub fn new(params: LambdaSystemParams, field: FockSpace) -> Result<Self> {
        params.validate()?;
        let a = annihilation(field);
        let id = identity(field);
        let s_ig = atom_transition(3, LEVEL_I, LEVEL_G)?;
        let s_ie = atom_transition(3, LEVEL_I, LEVEL_E)?;
        let p = &params;
        let spec = [
            (p.lambda_g, p.cavity_delta_g, tensor(&s_ig, &a)),
            (p.lambda_e, -p.cavity_delta_e, tensor(&s_ie, &a)),
            (p.rabi_g1, -p.delta_g1, tensor(&s_ig, &id)),
            (p.rabi_g2, p.delta_g2, tensor(&s_ig, &id)),
            (p.rabi_e1, p.delta_e1, tensor(&s_ie, &id)),
            (p.rabi_e2, -p.delta_e2, tensor(&s_ie, &id)),
        ];
        let terms = spec
            .into_iter()
            .filter(|(c, _, _)| *c != 0.0)
            .map(|(coeff, freq, op)| Term {
                coeff,
                freq,
                op: op.into_mat(),
            })
            .collect();
        Ok(Self {
            params,
            field,
            terms,
        })
    }

    pub fn params(&self) -> &LambdaSystemParams {
        &self.params
    }

    pub fn field(&self) -> FockSpace {
        self.field
    }

    /// Largest angular frequency present, which sets the integrator step.
    pub fn max_frequency(&self) -> f64 {
        self.terms.iter().map(|t| t.freq.abs()).fold(0.0, f64::max)
    }

    pub fn operator_at(&self, t: f64) -> Operator {
        Operator::from_mat(self.at(t)).expect("square by construction")
    }
}

impl HamiltonianSource for FullHamiltonian {
    fn dim(&self) -> usize {
        3 * self.field.dim()
    }

    fn at(&self, t: f64) -> Mat<C64> {
        let n = HamiltonianSource::dim(self);
        let mut m = Mat::<C64>::zeros(n, n);
        for term in &self.terms {
            let c = C64::from_polar(term.coeff, term.freq * t);
            m += faer::Scale(c) * &term.op;
        }
        let adj = m.adjoint().to_owned();
        m + adj
    }

    fn period(&self) -> Option<f64> {
        common_period(&self.terms.iter().map(|t| t.freq).collect::<Vec<_>>())
    }

    fn is_static(&self) -> bool {
        self.terms.iter().all(|t| t.freq == 0.0)
    }
}

/// Common period `2π/ν₀` of `e^{iν_k t}` when every non-zero `ν_k` is an
/// integer multiple of some `ν₀ = 10^{−s}`-scaled integer gcd (`s ≤ 6`).
fn common_period(freqs: &[f64]) -> Option<f64> {
    let nonzero: Vec<f64> = freqs.iter().map(|f| f.abs()).filter(|&f| f > 0.0).collect();
    if nonzero.is_empty() {
        return None;
    }
    for decimals in 0..=6 {
        let scale = 10f64.powi(decimals);
        let ints: Option<Vec<u64>> = nonzero
            .iter()
            .map(|&f| {
                let x = f * scale;
                let r = x.round();
                ((x - r).abs() <= 1e-9 * x.max(1.0) && r < 1e15).then_some(r as u64)
            })
            .collect();
        if let Some(ints) = ints {
            let g = ints.iter().copied().fold(0, gcd);
            return Some(TAU * scale / g as f64);
        }
    }
    None
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `σ₊ = |e⟩⟨g|` on the two-level atom.
pub fn sigma_plus() -> Operator {
    atom_transition(2, LEVEL_E, LEVEL_G).expect("levels exist")
}

/// `σ₋ = |g⟩⟨e|` on the two-level atom.
pub fn sigma_minus() -> Operator {
    atom_transition(2, LEVEL_G, LEVEL_E).expect("levels exist")
}

/// `g(σ₊ ⊗ A + σ₋ ⊗ A†)` on the two-level atom ⊗ field.
pub fn effective_hamiltonian(eff: &EffectiveParams, pair: &BogoliubovPair) -> Result<Operator> {
    if (eff.kappa - pair.kappa()).abs() > 1e-12 {
        return Err(Error::Constraint {
            relation: "effective kappa = Bogoliubov kappa",
            detail: format!("{} vs {}", eff.kappa, pair.kappa()),
        });
    }
    let up = tensor(&sigma_plus(), pair.annihilator());
    let down = tensor(&sigma_minus(), pair.creator());
    Ok((&up + &down).scale_real(eff.g))
}

/// Generalized excitation number `σ₊σ₋ ⊗ 1 + 1 ⊗ A†A`, conserved by the
/// effective Hamiltonian.
pub fn excitation_operator(pair: &BogoliubovPair) -> Operator {
    let atom = &sigma_plus() * &sigma_minus();
    let field_id = identity(pair.space());
    &tensor(&atom, &field_id) + &tensor(&Operator::identity(2), &pair.number())
}
