// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_2_PI;

use crate::hilbert::DensityMatrix;
use crate::{Error, Result, C64};

/// Rectangular phase-space grid, `points` samples per axis including both
/// ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub points: usize,
}

impl Default for WignerSpec {
    fn default() -> Self {
        Self {
            x_min: -3.0,
            x_max: 3.0,
            p_min: -3.0,
            p_max: 3.0,
            points: 121,
        }
    }
}

impl WignerSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.points >= 2
            && self.x_min < self.x_max
            && self.p_min < self.p_max
            && [self.x_min, self.x_max, self.p_min, self.p_max]
                .iter()
                .all(|v| v.is_finite());
        if !ok {
            return Err(Error::InvalidShape(format!("invalid Wigner grid {self:?}")));
        }
        Ok(())
    }

    fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let h = (hi - lo) / (n - 1) as f64;
        (0..n).map(|k| lo + k as f64 * h).collect()
    }
}

/// Sampled Wigner function, `values[ix][ip]` at `α = x + ip`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

fn trapezoid(h: f64, ys: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = ys.len();
    ys.enumerate()
        .map(|(k, y)| if k == 0 || k + 1 == n { 0.5 * y } else { y })
        .sum::<f64>()
        * h
}

impl WignerGrid {
    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix][ip]
    }

    fn dx(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }

    fn dp(&self) -> f64 {
        self.ps[1] - self.ps[0]
    }

    /// `∫ W dx dp` by the trapezoid rule.
    pub fn integral(&self) -> f64 {
        let m = self.marginal_x();
        trapezoid(self.dx(), m.into_iter())
    }

    /// `∫ W dp` at every grid `x`.
    pub fn marginal_x(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|row| trapezoid(self.dp(), row.iter().copied()))
            .collect()
    }

    /// Variance of `x` under the `p`-marginal.
    pub fn marginal_x_variance(&self) -> f64 {
        let m = self.marginal_x();
        let norm = trapezoid(self.dx(), m.iter().copied());
        let mean = trapezoid(self.dx(), m.iter().zip(&self.xs).map(|(w, x)| w * x)) / norm;
        trapezoid(
            self.dx(),
            m.iter().zip(&self.xs).map(|(w, x)| w * (x - mean) * (x - mean)),
        ) / norm
    }

    /// `(x, p, W)` rows, `x` outer.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.xs.iter().enumerate().flat_map(move |(i, &x)| {
            self.ps
                .iter()
                .enumerate()
                .map(move |(j, &p)| (x, p, self.values[i][j]))
        })
    }
}

/// `t[k][n] = √(n!/(n+k)!) x^{k/2} e^{−x/2} L_n^{(k)}(x)`, so that the
/// untruncated displacement has `⟨n+k|D(β)|n⟩ = e^{ikθ} t[k][n]` and
/// `⟨n|D(β)|n+k⟩ = (−e^{−iθ})^k t[k][n]` for `β = √x e^{iθ}`. Uses the
/// three-term Laguerre recurrence in `n`, rescaled so nothing overflows.
fn displacement_magnitudes(x: f64, d: usize, ln_fact: &[f64], t: &mut [Vec<f64>]) {
    for (k, row) in t.iter_mut().enumerate().take(d) {
        let kf = k as f64;
        let len = d - k;
        let c0 = if x == 0.0 {
            if k == 0 { 1.0 } else { 0.0 }
        } else {
            (0.5 * kf * x.ln() - 0.5 * x - 0.5 * ln_fact[k]).exp()
        };
        row[0] = c0;
        if len > 1 {
            row[1] = c0 * (1.0 + kf - x) / (1.0 + kf).sqrt();
        }
        for n in 1..len.saturating_sub(1) {
            let nf = n as f64;
            let r1 = ((nf + 1.0) / (nf + 1.0 + kf)).sqrt();
            let r2 = ((nf + 1.0) * nf / ((nf + 1.0 + kf) * (nf + kf))).sqrt();
            row[n + 1] =
                ((2.0 * nf + 1.0 + kf - x) * r1 * row[n] - (nf + kf) * r2 * row[n - 1]) / (nf + 1.0);
        }
    }
}

/// `W(α) = (2/π) Tr[ρ D(α) Π D†(α)] = (2/π) Tr[ρ D(2α) Π]` with parity
/// `Π = (−1)^{a†a}`, from exact displacement matrix elements. Only the
/// Hermitian part of `ρ` contributes.
pub fn wigner(rho: &DensityMatrix, spec: &WignerSpec) -> Result<WignerGrid> {
    spec.validate()?;
    let d = rho.dim();
    let xs = WignerSpec::axis(spec.x_min, spec.x_max, spec.points);
    let ps = WignerSpec::axis(spec.p_min, spec.p_max, spec.points);
    let mut ln_fact = vec![0.0; d + 1];
    for k in 1..=d {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    let mut t: Vec<Vec<f64>> = (0..d).map(|k| vec![0.0; d - k]).collect();
    let mut values = vec![vec![0.0; ps.len()]; xs.len()];
    for (i, &x) in xs.iter().enumerate() {
        for (j, &p) in ps.iter().enumerate() {
            let beta = C64::new(2.0 * x, 2.0 * p);
            displacement_magnitudes(beta.norm_sqr(), d, &ln_fact, &mut t);
            let phase = C64::from_polar(1.0, beta.arg());
            let mut acc = 0.0;
            let mut rot = C64::new(1.0, 0.0);
            for (k, row) in t.iter().enumerate() {
                let weight = if k == 0 { 1.0 } else { 2.0 };
                let mut s = 0.0;
                for (n, &tn) in row.iter().enumerate() {
                    let z = (rho.get(n, n + k) * rot).re * tn;
                    s += if n % 2 == 0 { z } else { -z };
                }
                acc += weight * s;
                rot *= phase;
            }
            values[i][j] = FRAC_2_PI * acc;
        }
    }
    let grid = WignerGrid { xs, ps, values };
    let total = grid.integral();
    if (total - 1.0).abs() > 0.02 {
        log::warn!("Wigner grid holds {total:.4} of the quasi-probability; widen the grid");
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{displacement, parity, FockSpace, StateVector};
    use crate::observables::{quadrature_variances, squeezed_vacuum};

    fn fock(d: usize, n: usize) -> DensityMatrix {
        DensityMatrix::from_pure(&StateVector::fock(FockSpace::new(d).unwrap(), n).unwrap())
    }

    fn laguerre(n: usize, x: f64) -> f64 {
        let (mut l0, mut l1) = (1.0, 1.0 - x);
        if n == 0 {
            return l0;
        }
        for k in 1..n {
            let kf = k as f64;
            let l2 = ((2.0 * kf + 1.0 - x) * l1 - kf * l0) / (kf + 1.0);
            l0 = l1;
            l1 = l2;
        }
        l1
    }

    #[test]
    fn vacuum_and_one_photon_at_origin() {
        let spec = WignerSpec {
            points: 5,
            ..Default::default()
        };
        let w0 = wigner(&fock(10, 0), &spec).unwrap();
        assert!((w0.value(2, 2) - FRAC_2_PI).abs() < 1e-14);
        let w1 = wigner(&fock(10, 1), &spec).unwrap();
        assert!((w1.value(2, 2) + FRAC_2_PI).abs() < 1e-14);
    }

    #[test]
    fn fock_states_match_laguerre_form() {
        // W_n(α) = (2/π)(−1)^n L_n(4|α|²) e^{−2|α|²}
        let spec = WignerSpec {
            points: 13,
            ..Default::default()
        };
        for n in [0, 3, 10, 25, 45] {
            let grid = wigner(&fock(60, n), &spec).unwrap();
            for (x, p, w) in grid.rows() {
                let r2 = x * x + p * p;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let expect = FRAC_2_PI * sign * laguerre(n, 4.0 * r2) * (-2.0 * r2).exp();
                assert!((w - expect).abs() < 1e-12 + 1e-9 * expect.abs(), "n={n} x={x} p={p}: {w} vs {expect}");
            }
        }
    }

    #[test]
    fn matches_displaced_parity_trace() {
        let d = 30;
        let s = FockSpace::new(d).unwrap();
        let psi = squeezed_vacuum(s, 0.4).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let spec = WignerSpec {
            x_min: -1.0,
            x_max: 1.0,
            p_min: -1.0,
            p_max: 1.0,
            points: 5,
        };
        let grid = wigner(&rho, &spec).unwrap();
        let pi = parity(s);
        for (x, p, w) in grid.rows() {
            let dop = displacement(s, C64::new(x, p)).unwrap();
            let kernel = &(&dop * &pi) * &dop.adjoint();
            let expect = FRAC_2_PI * rho.expectation(&kernel).re;
            assert!((w - expect).abs() < 1e-8, "({x}, {p}): {w} vs {expect}");
        }
    }

    #[test]
    fn squeezed_vacuum_grid() {
        let r = 0.6f64.atanh();
        let rho = DensityMatrix::from_pure(&squeezed_vacuum(FockSpace::new(60).unwrap(), r).unwrap());
        let grid = wigner(&rho, &WignerSpec::default()).unwrap();
        assert!((grid.integral() - 1.0).abs() < 0.02);
        let (v1, _) = quadrature_variances(&rho);
        assert!((grid.marginal_x_variance() / v1 - 1.0).abs() < 0.02);
        // peak at the origin, narrower along x than along p
        let c = 60;
        let peak = grid.value(c, c);
        assert!(grid.rows().all(|(_, _, w)| w <= peak + 1e-12));
        assert!(grid.value(c + 10, c) < grid.value(c, c + 10));
    }

    #[test]
    fn coherent_state_is_displaced_gaussian() {
        let s = FockSpace::new(40).unwrap();
        let alpha = C64::new(0.5, -1.0);
        let dop = displacement(s, alpha).unwrap();
        let amps: Vec<C64> = (0..40).map(|n| dop.get(n, 0)).collect();
        let rho = DensityMatrix::from_pure(&StateVector::from_amplitudes(&amps).unwrap());
        let grid = wigner(&rho, &WignerSpec { points: 25, ..Default::default() }).unwrap();
        for (x, p, w) in grid.rows() {
            let r2 = (x - alpha.re).powi(2) + (p - alpha.im).powi(2);
            assert!((w - FRAC_2_PI * (-2.0 * r2).exp()).abs() < 1e-9, "({x}, {p})");
        }
    }

    #[test]
    fn rejects_degenerate_grid() {
        let spec = WignerSpec {
            points: 1,
            ..Default::default()
        };
        assert!(wigner(&fock(4, 0), &spec).is_err());
    }
}
