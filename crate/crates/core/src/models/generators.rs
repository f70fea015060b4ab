// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Master-equation right-hand sides for the laser, the per-atom injection
//! step and the engineered reservoir.

use faer::{Mat, MatRef};

use super::hamiltonians::{effective_hamiltonian, sigma_minus, LEVEL_E, LEVEL_G};
use super::lindblad::{Generator, Lindbladian};
use super::params::{EffectiveParams, EngineeredReservoirParams, LaserRateParams};
use crate::algebra::BogoliubovPair;
use crate::hilbert::{annihilation, tensor, DensityMatrix, Operator};
use crate::{Error, Result, C64};

fn check_dim(rho: &DensityMatrix, dim: usize, what: &str) -> Result<()> {
    if rho.dim() != dim {
        return Err(Error::InvalidShape(format!(
            "{what} expects a {dim}-dimensional state, got {}",
            rho.dim()
        )));
    }
    Ok(())
}

/// Gain, saturation and loss of the laser master equation in the
/// generalized operators, with `M = AA†`:
///
/// ```text
/// L_A ρ = (𝒜/2)(2A†ρA − Mρ − ρM)
/// L_B ρ = (ℬ/2)[¼M(Mρ + 3ρM) + ¼(ρM + 3Mρ)M − A†(Mρ + ρM)A]
/// L_C ρ = (𝒞/2)(2AρA† − A†Aρ − ρA†A)
/// ```
///
/// The saturation term is the fourth-order truncation exactly as written
/// above; it is a valid Lindbladian only while `ℬ(n+1) < 𝒜` over the
/// populated levels.
#[derive(Debug, Clone)]
pub struct LaserGenerator {
    rates: LaserRateParams,
    a: Mat<C64>,
    a_dag: Mat<C64>,
    m: Mat<C64>,
    n: Mat<C64>,
}

impl LaserGenerator {
    pub fn new(rates: LaserRateParams, pair: &BogoliubovPair) -> Self {
        let a = pair.annihilator().as_mat().to_owned();
        let a_dag = pair.creator().as_mat().to_owned();
        let m = &a * &a_dag;
        let n = &a_dag * &a;
        Self {
            rates,
            a,
            a_dag,
            m,
            n,
        }
    }

    pub fn rates(&self) -> &LaserRateParams {
        &self.rates
    }

    pub fn gain(&self, rho: MatRef<'_, C64>) -> Mat<C64> {
        let up = &self.a_dag * rho * &self.a;
        let mr = &self.m * rho;
        let rm = rho * &self.m;
        let half = 0.5 * self.rates.gain_a;
        Mat::from_fn(rho.nrows(), rho.ncols(), |i, j| {
            (up[(i, j)] * 2.0 - mr[(i, j)] - rm[(i, j)]) * half
        })
    }

    pub fn saturation(&self, rho: MatRef<'_, C64>) -> Mat<C64> {
        let mr = &self.m * rho;
        let rm = rho * &self.m;
        let left = &self.m * (&mr + faer::Scale(C64::new(3.0, 0.0)) * &rm);
        let right = (&rm + faer::Scale(C64::new(3.0, 0.0)) * &mr) * &self.m;
        let sandwich = &self.a_dag * (&mr + &rm) * &self.a;
        let half = 0.5 * self.rates.saturation_b;
        Mat::from_fn(rho.nrows(), rho.ncols(), |i, j| {
            ((left[(i, j)] + right[(i, j)]) * 0.25 - sandwich[(i, j)]) * half
        })
    }

    pub fn loss(&self, rho: MatRef<'_, C64>) -> Mat<C64> {
        let down = &self.a * rho * &self.a_dag;
        let nr = &self.n * rho;
        let rn = rho * &self.n;
        let half = 0.5 * self.rates.loss_c;
        Mat::from_fn(rho.nrows(), rho.ncols(), |i, j| {
            (down[(i, j)] * 2.0 - nr[(i, j)] - rn[(i, j)]) * half
        })
    }
}

impl Generator for LaserGenerator {
    fn dim(&self) -> usize {
        self.a.nrows()
    }

    fn apply(&self, rho: MatRef<'_, C64>) -> Mat<C64> {
        let mut out = self.gain(rho);
        if self.rates.saturation_b != 0.0 {
            out += self.saturation(rho);
        }
        out += self.loss(rho);
        out
    }
}

/// `dρ/dt` of the laser master equation.
pub fn laser_rhs(
    rho: &DensityMatrix,
    rates: &LaserRateParams,
    pair: &BogoliubovPair,
) -> Result<Mat<C64>> {
    check_dim(rho, pair.space().dim(), "laser master equation")?;
    Ok(LaserGenerator::new(*rates, pair).apply(rho.as_mat()))
}

/// Reference construction of the per-atom step from tensor products:
/// `−i[H_eff, ρ] + (𝒞/2)D[1⊗A]ρ + (γ/2)D[σ₋⊗1]ρ`.
pub fn atom_step_lindbladian(
    eff: &EffectiveParams,
    loss_c: f64,
    gamma: f64,
    pair: &BogoliubovPair,
) -> Result<Lindbladian> {
    let d = pair.space().dim();
    let h = effective_hamiltonian(eff, pair)?;
    let field_loss = tensor(&Operator::identity(2), pair.annihilator());
    let atom_decay = tensor(&sigma_minus(), &Operator::identity(d));
    Lindbladian::new(2 * d)
        .with_hamiltonian(&h)?
        .with_channel(loss_c, &field_loss)?
        .with_channel(gamma, &atom_decay)
}

/// The per-atom step generator evaluated block by block.
///
/// `A` has two non-zero diagonals, so every product with it is applied as a
/// banded update and one evaluation costs `O(d²)` instead of the `O(d³)` of
/// dense products on the `2d`-dimensional joint space.
#[derive(Debug, Clone)]
pub struct AtomStepGenerator {
    d: usize,
    g: f64,
    kappa: f64,
    inv_s: f64,
    loss_c: f64,
    gamma: f64,
    sqrt: Vec<f64>,
}

impl AtomStepGenerator {
    pub fn new(
        eff: &EffectiveParams,
        loss_c: f64,
        gamma: f64,
        pair: &BogoliubovPair,
    ) -> Result<Self> {
        if (eff.kappa - pair.kappa()).abs() > 1e-12 {
            return Err(Error::Constraint {
                relation: "effective kappa = Bogoliubov kappa",
                detail: format!("{} vs {}", eff.kappa, pair.kappa()),
            });
        }
        for (name, rate) in [("loss_c", loss_c), ("gamma", gamma)] {
            if !(rate.is_finite() && rate >= 0.0) {
                return Err(Error::UnphysicalParameter(format!(
                    "{name} = {rate} must be non-negative"
                )));
            }
        }
        let d = pair.space().dim();
        let kappa = pair.kappa();
        Ok(Self {
            d,
            g: eff.g,
            kappa,
            inv_s: 1.0 / (1.0 - kappa * kappa).sqrt(),
            loss_c,
            gamma,
            sqrt: (0..=d).map(|k| (k as f64).sqrt()).collect(),
        })
    }

    pub fn field_dim(&self) -> usize {
        self.d
    }

    /// `A X`.
    fn left_a(&self, x: MatRef<'_, C64>) -> Mat<C64> {
        let d = self.d;
        let (sq, k, s) = (&self.sqrt, self.kappa, self.inv_s);
        Mat::from_fn(d, x.ncols(), |i, j| {
            let mut v = C64::new(0.0, 0.0);
            if i + 1 < d {
                v += x[(i + 1, j)] * sq[i + 1];
            }
            if i > 0 {
                v += x[(i - 1, j)] * (k * sq[i]);
            }
            v * s
        })
    }

    /// `A† X`.
    fn left_a_dag(&self, x: MatRef<'_, C64>) -> Mat<C64> {
        let d = self.d;
        let (sq, k, s) = (&self.sqrt, self.kappa, self.inv_s);
        Mat::from_fn(d, x.ncols(), |i, j| {
            let mut v = C64::new(0.0, 0.0);
            if i > 0 {
                v += x[(i - 1, j)] * sq[i];
            }
            if i + 1 < d {
                v += x[(i + 1, j)] * (k * sq[i + 1]);
            }
            v * s
        })
    }

    /// `X A`.
    fn right_a(&self, x: MatRef<'_, C64>) -> Mat<C64> {
        let d = self.d;
        let (sq, k, s) = (&self.sqrt, self.kappa, self.inv_s);
        Mat::from_fn(x.nrows(), d, |i, j| {
            let mut v = C64::new(0.0, 0.0);
            if j > 0 {
                v += x[(i, j - 1)] * sq[j];
            }
            if j + 1 < d {
                v += x[(i, j + 1)] * (k * sq[j + 1]);
            }
            v * s
        })
    }

    /// `X A†`.
    fn right_a_dag(&self, x: MatRef<'_, C64>) -> Mat<C64> {
        let d = self.d;
        let (sq, k, s) = (&self.sqrt, self.kappa, self.inv_s);
        Mat::from_fn(x.nrows(), d, |i, j| {
            let mut v = C64::new(0.0, 0.0);
            if j + 1 < d {
                v += x[(i, j + 1)] * sq[j + 1];
            }
            if j > 0 {
                v += x[(i, j - 1)] * (k * sq[j]);
            }
            v * s
        })
    }

    /// `(𝒞/2)(2AXA† − A†AX − XA†A)` on one field block.
    fn field_loss(&self, x: MatRef<'_, C64>) -> Mat<C64> {
        let ax = self.left_a(x);
        let jump = self.right_a_dag(ax.as_ref());
        let nx = self.left_a_dag(ax.as_ref());
        let xa_dag = self.right_a_dag(x);
        let xn = self.right_a(xa_dag.as_ref());
        let half = 0.5 * self.loss_c;
        Mat::from_fn(self.d, self.d, |i, j| {
            (jump[(i, j)] * 2.0 - nx[(i, j)] - xn[(i, j)]) * half
        })
    }
}

impl Generator for AtomStepGenerator {
    fn dim(&self) -> usize {
        2 * self.d
    }

    fn apply(&self, rho: MatRef<'_, C64>) -> Mat<C64> {
        let d = self.d;
        let block = |a: usize, b: usize| rho.submatrix(a * d, b * d, d, d);
        let (gg, ge, eg, ee) = (
            block(LEVEL_G, LEVEL_G),
            block(LEVEL_G, LEVEL_E),
            block(LEVEL_E, LEVEL_G),
            block(LEVEL_E, LEVEL_E),
        );
        let mut out = Mat::<C64>::zeros(2 * d, 2 * d);

        if self.g != 0.0 {
            // H = g(|e⟩⟨g| ⊗ A + |g⟩⟨e| ⊗ A†); blocks of Hρ − ρH
            let mig = C64::new(0.0, -self.g);
            let comm = [
                (LEVEL_G, LEVEL_G, self.left_a_dag(eg), self.right_a(ge)),
                (LEVEL_G, LEVEL_E, self.left_a_dag(ee), self.right_a_dag(gg)),
                (LEVEL_E, LEVEL_G, self.left_a(gg), self.right_a(ee)),
                (LEVEL_E, LEVEL_E, self.left_a(ge), self.right_a_dag(eg)),
            ];
            for (a, b, hr, rh) in comm {
                let mut dst = out.as_mut().submatrix_mut(a * d, b * d, d, d);
                for j in 0..d {
                    for i in 0..d {
                        dst[(i, j)] += mig * (hr[(i, j)] - rh[(i, j)]);
                    }
                }
            }
        }

        if self.loss_c != 0.0 {
            for (a, b, x) in [
                (LEVEL_G, LEVEL_G, gg),
                (LEVEL_G, LEVEL_E, ge),
                (LEVEL_E, LEVEL_G, eg),
                (LEVEL_E, LEVEL_E, ee),
            ] {
                let l = self.field_loss(x);
                let mut dst = out.as_mut().submatrix_mut(a * d, b * d, d, d);
                dst += &l;
            }
        }

        if self.gamma != 0.0 {
            let gm = self.gamma;
            for j in 0..d {
                for i in 0..d {
                    out[(LEVEL_G * d + i, LEVEL_G * d + j)] += ee[(i, j)] * gm;
                    out[(LEVEL_G * d + i, LEVEL_E * d + j)] -= ge[(i, j)] * (0.5 * gm);
                    out[(LEVEL_E * d + i, LEVEL_G * d + j)] -= eg[(i, j)] * (0.5 * gm);
                    out[(LEVEL_E * d + i, LEVEL_E * d + j)] -= ee[(i, j)] * gm;
                }
            }
        }
        out
    }
}

/// `dρ/dt` of one atom-field interaction step.
pub fn atom_step_rhs(
    rho_joint: &DensityMatrix,
    eff: &EffectiveParams,
    loss_c: f64,
    gamma: f64,
    pair: &BogoliubovPair,
) -> Result<Mat<C64>> {
    check_dim(rho_joint, 2 * pair.space().dim(), "atom step")?;
    Ok(AtomStepGenerator::new(eff, loss_c, gamma, pair)?.apply(rho_joint.as_mat()))
}

/// `(Γ/2)D[A]ρ + (Γ̃/2)D[a]ρ`.
pub fn engineered_reservoir(
    res: &EngineeredReservoirParams,
    pair: &BogoliubovPair,
) -> Result<Lindbladian> {
    Lindbladian::new(pair.space().dim())
        .with_channel(res.gamma_big, pair.annihilator())?
        .with_channel(res.gamma_tilde, &annihilation(pair.space()))
}

pub fn engineered_reservoir_rhs(
    rho: &DensityMatrix,
    res: &EngineeredReservoirParams,
    pair: &BogoliubovPair,
) -> Result<Mat<C64>> {
    check_dim(rho, pair.space().dim(), "engineered reservoir")?;
    Ok(engineered_reservoir(res, pair)?.apply(rho.as_mat()))
}
