// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Field observables: moments, quadrature variances, photon statistics,
//! fidelities, Wigner functions and Fock-basis coherences.
//!
//! Quadratures are `X₁ = (a + a†)/2` and `X₂ = (a − a†)/2i`, so the vacuum
//! has `(ΔX₁)² = (ΔX₂)² = 1/4` and phase-space points are `α = x + ip`.

mod wigner;

pub use wigner::{wigner, WignerGrid, WignerSpec};

use crate::hilbert::{squeeze, DensityMatrix, FockSpace, Operator, StateVector};
use crate::{Error, Result, C64};

/// Below this mean photon number the Mandel parameter is undefined.
pub const MANDEL_UNDEFINED_BELOW: f64 = 1e-12;

/// Time series skip Mandel samples whose mean photon number is below this.
pub const MANDEL_SERIES_FLOOR: f64 = 1e-6;

/// `Tr(ρ O)`.
pub fn expectation(rho: &DensityMatrix, obs: &Operator) -> Result<C64> {
    if rho.dim() != obs.dim() {
        return Err(Error::InvalidShape(format!(
            "observable of dimension {} on a {}-dimensional state",
            obs.dim(),
            rho.dim()
        )));
    }
    Ok(rho.expectation(obs))
}

/// `⟨a⟩`, `⟨a²⟩`, `⟨n⟩` and `⟨n²⟩` in one pass over the matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub a: C64,
    pub a2: C64,
    pub n: f64,
    pub n2: f64,
}

pub fn moments(rho: &DensityMatrix) -> Moments {
    let d = rho.dim();
    let mut a = C64::new(0.0, 0.0);
    let mut a2 = C64::new(0.0, 0.0);
    let mut n = 0.0;
    let mut n2 = 0.0;
    for k in 0..d {
        let kf = k as f64;
        let p = rho.get(k, k).re;
        n += kf * p;
        n2 += kf * kf * p;
        // Tr(ρ a) = Σ ρ[k+1, k] √(k+1)
        if k + 1 < d {
            a += rho.get(k + 1, k) * (kf + 1.0).sqrt();
        }
        if k + 2 < d {
            a2 += rho.get(k + 2, k) * ((kf + 1.0) * (kf + 2.0)).sqrt();
        }
    }
    Moments { a, a2, n, n2 }
}

/// `(ΔX₁)², (ΔX₂)²`.
pub fn quadrature_variances(rho: &DensityMatrix) -> (f64, f64) {
    let m = moments(rho);
    // X₁² = (a² + a†² + 2a†a + 1)/4, X₂² = −(a² + a†² − 2a†a − 1)/4
    let re_a2 = m.a2.re;
    let x1 = m.a.re;
    let x2 = m.a.im;
    let var1 = (2.0 * re_a2 + 2.0 * m.n + 1.0) / 4.0 - x1 * x1;
    let var2 = (-2.0 * re_a2 + 2.0 * m.n + 1.0) / 4.0 - x2 * x2;
    (var1, var2)
}

/// Fock populations `P_n = ρ_nn`. Mass missing from `Σ P_n` is logged.
pub fn photon_distribution(rho: &DensityMatrix) -> Vec<f64> {
    let p = rho.populations();
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        log::warn!("photon distribution sums to {total:.10} (truncation tail {:.2e})", 1.0 - total);
    }
    p
}

pub fn mean_photon_number(rho: &DensityMatrix) -> f64 {
    moments(rho).n
}

/// `Q = (⟨n²⟩ − ⟨n⟩²)/⟨n⟩ − 1`.
pub fn mandel_q(rho: &DensityMatrix) -> Result<f64> {
    let m = moments(rho);
    if m.n <= MANDEL_UNDEFINED_BELOW {
        return Err(Error::UndefinedStatistic(format!(
            "Mandel Q needs <n> > {MANDEL_UNDEFINED_BELOW:e}, got {:e}",
            m.n
        )));
    }
    Ok((m.n2 - m.n * m.n) / m.n - 1.0)
}

/// Mandel parameter for time series: `None` while `⟨n⟩ < 1e−6`.
pub fn mandel_q_sample(rho: &DensityMatrix) -> Option<f64> {
    (mean_photon_number(rho) >= MANDEL_SERIES_FLOOR)
        .then(|| mandel_q(rho).ok())
        .flatten()
}

/// `S(r)|0⟩` for real `r`.
pub fn squeezed_vacuum(space: FockSpace, r: f64) -> Result<StateVector> {
    let s = squeeze(space, C64::new(r, 0.0))?;
    let amps: Vec<C64> = (0..space.dim()).map(|n| s.get(n, 0)).collect();
    StateVector::from_amplitudes(&amps)
}

/// `⟨0|S†(r) ρ S(r)|0⟩`.
pub fn fidelity_to_squeezed_vacuum(rho: &DensityMatrix, r: f64) -> Result<f64> {
    let target = squeezed_vacuum(FockSpace::new(rho.dim())?, r)?;
    Ok(rho.fidelity_pure(&target))
}

/// `ρ_ij` for each requested pair.
pub fn coherence_elements(rho: &DensityMatrix, pairs: &[(usize, usize)]) -> Result<Vec<C64>> {
    let d = rho.dim();
    pairs
        .iter()
        .map(|&(i, j)| {
            if i >= d || j >= d {
                Err(Error::IndexOutOfRange {
                    row: i,
                    col: j,
                    dim: d,
                })
            } else {
                Ok(rho.get(i, j))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{generalized_coherent, BogoliubovPair};
    use crate::hilbert::{displacement, number, quadrature_x1, quadrature_x2};
    use proptest::prelude::*;

    fn fs(d: usize) -> FockSpace {
        FockSpace::new(d).unwrap()
    }

    fn coherent(d: usize, alpha: C64) -> DensityMatrix {
        let op = displacement(fs(d), alpha).unwrap();
        let amps: Vec<C64> = (0..d).map(|n| op.get(n, 0)).collect();
        DensityMatrix::from_pure(&StateVector::from_amplitudes(&amps).unwrap())
    }

    fn sq(d: usize, r: f64) -> DensityMatrix {
        DensityMatrix::from_pure(&squeezed_vacuum(fs(d), r).unwrap())
    }

    #[test]
    fn basic_expectations() {
        let s = fs(5);
        let rho = DensityMatrix::from_pure(&StateVector::fock(s, 2).unwrap());
        assert_eq!(expectation(&rho, &Operator::identity(5)).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(expectation(&rho, &number(s)).unwrap(), C64::new(2.0, 0.0));
        assert!(expectation(&rho, &Operator::identity(4)).is_err());
        assert_eq!(photon_distribution(&rho)[2], 1.0);
    }

    #[test]
    fn squeezed_vacuum_moments() {
        let r = 0.6f64.atanh();
        let rho = sq(60, r);
        let n = expectation(&rho, &number(fs(60))).unwrap();
        assert!((n.re - r.sinh().powi(2)).abs() < 1e-3);
        assert!(n.im.abs() < 1e-10);
        let (v1, v2) = quadrature_variances(&rho);
        assert!((v1 - (-2.0 * r).exp() / 4.0).abs() < 1e-8);
        assert!((v2 - (2.0 * r).exp() / 4.0).abs() < 1e-8);
        let p = photon_distribution(&rho);
        assert!(p.iter().skip(1).step_by(2).all(|&x| x < 1e-10));
        let q = mandel_q(&rho).unwrap();
        assert!((q - (2.0 * r).cosh()).abs() < 1e-2, "{q}");
        assert!((q - 2.125).abs() < 1e-2);
    }

    #[test]
    fn variances_match_operator_route() {
        let s = fs(30);
        let rho = coherent(30, C64::new(0.7, -0.4));
        let x1 = quadrature_x1(s);
        let x2 = quadrature_x2(s);
        let var = |x: &Operator| {
            let m = rho.expectation(x).re;
            rho.expectation(&(x * x)).re - m * m
        };
        let (v1, v2) = quadrature_variances(&rho);
        assert!((v1 - var(&x1)).abs() < 1e-9);
        assert!((v2 - var(&x2)).abs() < 1e-9);
        assert!((v1 - 0.25).abs() < 1e-8 && (v2 - 0.25).abs() < 1e-8);
    }

    #[test]
    fn vacuum_values() {
        let rho = DensityMatrix::from_pure(&StateVector::fock(fs(10), 0).unwrap());
        assert_eq!(quadrature_variances(&rho), (0.25, 0.25));
        assert!(matches!(mandel_q(&rho), Err(Error::UndefinedStatistic(_))));
        assert_eq!(mandel_q_sample(&rho), None);
    }

    #[test]
    fn mandel_limits() {
        let fock = DensityMatrix::from_pure(&StateVector::fock(fs(10), 3).unwrap());
        assert!((mandel_q(&fock).unwrap() + 1.0).abs() < 1e-12);
        let coh = coherent(40, C64::new(1.2, 0.3));
        assert!(mandel_q(&coh).unwrap().abs() < 1e-6);
    }

    #[test]
    fn fidelity_values() {
        let r = 0.69;
        let target = sq(40, r);
        assert!((fidelity_to_squeezed_vacuum(&target, r).unwrap() - 1.0).abs() < 1e-8);
        let vac = DensityMatrix::from_pure(&StateVector::fock(fs(60), 0).unwrap());
        let f = fidelity_to_squeezed_vacuum(&vac, r).unwrap();
        assert!((f - 1.0 / r.cosh()).abs() < 1e-9, "{f}");
        // r = 0 reduces to the vacuum population
        let mixed = DensityMatrix::from_diagonal(&[0.7, 0.2, 0.1]).unwrap();
        assert!((fidelity_to_squeezed_vacuum(&mixed, 0.0).unwrap() - 0.7).abs() < 1e-14);
    }

    #[test]
    fn coherences_of_even_state() {
        let rho = sq(40, 0.69);
        let c = coherence_elements(&rho, &[(0, 8), (0, 7), (3, 3)]).unwrap();
        assert!(c[0].norm() > 1e-3 && c[0].im.abs() < 1e-12);
        assert!(c[1].norm() < 1e-12);
        assert_eq!(c[2].re, rho.get(3, 3).re);
        assert!(coherence_elements(&rho, &[(0, 40)]).is_err());
    }

    #[test]
    fn generalized_coherent_has_odd_populations() {
        let pair = BogoliubovPair::new(0.6, fs(60)).unwrap();
        let psi = generalized_coherent(&pair, C64::new(0.18, 0.0)).unwrap();
        let p = photon_distribution(&DensityMatrix::from_pure(&psi));
        let odd: f64 = p.iter().skip(1).step_by(2).sum();
        let even: f64 = p.iter().step_by(2).sum();
        assert!(odd > 1e-3 && odd < even);
    }

    proptest! {
        #[test]
        fn heisenberg_bound(re in -1.5f64..1.5, im in -1.5f64..1.5, r in 0.0f64..1.0, w in 0.0f64..1.0) {
            let d = 50;
            let a = coherent(d, C64::new(re, im));
            let b = sq(d, r);
            let mix = DensityMatrix::from_mat_unchecked(
                a.as_mat() * faer::Scale(C64::new(w, 0.0)) + b.as_mat() * faer::Scale(C64::new(1.0 - w, 0.0)),
            ).unwrap();
            let (v1, v2) = quadrature_variances(&mix);
            prop_assert!(v1 * v2 >= 1.0 / 16.0 - 1e-9);
        }

        #[test]
        fn coherent_states_are_poissonian(re in -2.0f64..2.0, im in -2.0f64..2.0) {
            prop_assume!(re.hypot(im) > 0.1);
            let rho = coherent(60, C64::new(re, im));
            prop_assert!(mandel_q(&rho).unwrap().abs() < 1e-6);
        }
    }
}
