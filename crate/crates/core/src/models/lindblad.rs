// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

use faer::Mat;
use faer::MatRef;

use crate::hilbert::Operator;
use crate::{Error, Result, C64};

/// Time-independent linear map `ρ ↦ dρ/dt` on `dim × dim` matrices.
pub trait Generator: Sync {
    fn dim(&self) -> usize;

    fn apply(&self, rho: MatRef<'_, C64>) -> Mat<C64>;
}

/// Source of a possibly time-dependent Hamiltonian.
pub trait HamiltonianSource: Sync {
    fn dim(&self) -> usize;

    fn at(&self, t: f64) -> Mat<C64>;

    /// Exact period of `t ↦ H(t)` if there is one. Time-independent sources
    /// return `None`.
    fn period(&self) -> Option<f64> {
        None
    }

    fn is_static(&self) -> bool {
        false
    }
}

impl HamiltonianSource for Operator {
    fn dim(&self) -> usize {
        Operator::dim(self)
    }

    fn at(&self, _t: f64) -> Mat<C64> {
        self.as_mat().to_owned()
    }

    fn is_static(&self) -> bool {
        true
    }
}

pub(crate) fn neg_i() -> C64 {
    C64::new(0.0, -1.0)
}

/// `−i[H, ρ]`.
pub fn commutator_term(h: MatRef<'_, C64>, rho: MatRef<'_, C64>) -> Mat<C64> {
    let hr = h * rho;
    let rh = rho * h;
    Mat::from_fn(hr.nrows(), hr.ncols(), |i, j| neg_i() * (hr[(i, j)] - rh[(i, j)]))
}

/// `D[L]ρ = 2LρL† − L†Lρ − ρL†L`.
pub fn dissipator(l: MatRef<'_, C64>, rho: MatRef<'_, C64>) -> Mat<C64> {
    let ld = l.adjoint();
    let ldl = ld * l;
    let jump = l * rho * ld;
    let left = &ldl * rho;
    let right = rho * &ldl;
    Mat::from_fn(rho.nrows(), rho.ncols(), |i, j| {
        jump[(i, j)] * 2.0 - left[(i, j)] - right[(i, j)]
    })
}

/// `−i[H, ρ] + Σ_k (γ_k/2) D[L_k]ρ`.
#[derive(Debug, Clone)]
pub struct Lindbladian {
    dim: usize,
    hamiltonian: Option<Mat<C64>>,
    channels: Vec<Channel>,
}

#[derive(Debug, Clone)]
struct Channel {
    rate: f64,
    l: Mat<C64>,
    l_dag: Mat<C64>,
    l_dag_l: Mat<C64>,
}

impl Lindbladian {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            hamiltonian: None,
            channels: Vec::new(),
        }
    }

    pub fn with_hamiltonian(mut self, h: &Operator) -> Result<Self> {
        self.check(h)?;
        if !h.is_hermitian(1e-10) {
            return Err(Error::InvalidShape(format!(
                "Hamiltonian is not Hermitian (error {:.2e})",
                h.hermiticity_error()
            )));
        }
        self.hamiltonian = Some(h.as_mat().to_owned());
        Ok(self)
    }

    /// Adds `(rate/2) D[L]`.
    pub fn with_channel(mut self, rate: f64, l: &Operator) -> Result<Self> {
        self.check(l)?;
        if !(rate.is_finite() && rate >= 0.0) {
            return Err(Error::UnphysicalParameter(format!(
                "dissipation rate {rate} must be non-negative"
            )));
        }
        if rate > 0.0 {
            let lm = l.as_mat().to_owned();
            let l_dag = lm.adjoint().to_owned();
            let l_dag_l = &l_dag * &lm;
            self.channels.push(Channel {
                rate,
                l: lm,
                l_dag,
                l_dag_l,
            });
        }
        Ok(self)
    }

    fn check(&self, op: &Operator) -> Result<()> {
        if op.dim() != self.dim {
            return Err(Error::InvalidShape(format!(
                "operator of dimension {} in a {}-dimensional generator",
                op.dim(),
                self.dim
            )));
        }
        Ok(())
    }
}

impl Generator for Lindbladian {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, rho: MatRef<'_, C64>) -> Mat<C64> {
        let mut out = match &self.hamiltonian {
            Some(h) => commutator_term(h.as_ref(), rho),
            None => Mat::zeros(self.dim, self.dim),
        };
        for ch in &self.channels {
            let half = 0.5 * ch.rate;
            let jump = &ch.l * rho * &ch.l_dag;
            let left = &ch.l_dag_l * rho;
            let right = rho * &ch.l_dag_l;
            for j in 0..self.dim {
                for i in 0..self.dim {
                    out[(i, j)] +=
                        (jump[(i, j)] * 2.0 - left[(i, j)] - right[(i, j)]) * half;
                }
            }
        }
        out
    }
}

/// Dense `dim² × dim²` matrix of a generator in column-stacked vectorisation,
/// `vec(ρ)[i + j·dim] = ρ[i, j]`.
pub fn superoperator(generator: &dyn Generator) -> Mat<C64> {
    let d = generator.dim();
    let mut out = Mat::<C64>::zeros(d * d, d * d);
    let mut basis = Mat::<C64>::zeros(d, d);
    for j in 0..d {
        for i in 0..d {
            basis[(i, j)] = C64::new(1.0, 0.0);
            let image = generator.apply(basis.as_ref());
            basis[(i, j)] = C64::new(0.0, 0.0);
            let col = i + j * d;
            for q in 0..d {
                for p in 0..d {
                    out[(p + q * d, col)] = image[(p, q)];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{annihilation, number, FockSpace};

    #[test]
    fn empty_generator_is_zero() {
        let g = Lindbladian::new(4);
        let rho = Mat::<C64>::from_fn(4, 4, |i, j| C64::new((i + j) as f64, i as f64 - j as f64));
        assert_eq!(g.apply(rho.as_ref()), Mat::<C64>::zeros(4, 4));
    }

    #[test]
    fn photon_loss_matches_rate_equation() {
        let s = FockSpace::new(5).unwrap();
        let g = Lindbladian::new(5)
            .with_channel(2.0, &annihilation(s))
            .unwrap();
        let rho = Mat::<C64>::from_fn(5, 5, |i, j| {
            if i == j {
                C64::new([0.1, 0.2, 0.3, 0.4, 0.0][i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let d = g.apply(rho.as_ref());
        // dp_n/dt = γ[(n+1)p_{n+1} − n p_n]
        let p = [0.1, 0.2, 0.3, 0.4, 0.0];
        for n in 0..4 {
            let expect = 2.0 * ((n + 1) as f64 * p[n + 1] - n as f64 * p[n]);
            assert!((d[(n, n)].re - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn superoperator_matches_apply() {
        let s = FockSpace::new(3).unwrap();
        let g = Lindbladian::new(3)
            .with_hamiltonian(&number(s))
            .unwrap()
            .with_channel(0.7, &annihilation(s))
            .unwrap();
        let sup = superoperator(&g);
        let rho = Mat::<C64>::from_fn(3, 3, |i, j| C64::new(1.0 + i as f64, j as f64));
        let direct = g.apply(rho.as_ref());
        for j in 0..3 {
            for i in 0..3 {
                let mut acc = C64::new(0.0, 0.0);
                for q in 0..3 {
                    for p in 0..3 {
                        acc += sup[(i + 3 * j, p + 3 * q)] * rho[(p, q)];
                    }
                }
                assert!((acc - direct[(i, j)]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = FockSpace::new(3).unwrap();
        assert!(Lindbladian::new(4).with_channel(1.0, &annihilation(s)).is_err());
        assert!(Lindbladian::new(3).with_channel(-1.0, &annihilation(s)).is_err());
        assert!(Lindbladian::new(3).with_hamiltonian(&annihilation(s)).is_err());
    }
}
