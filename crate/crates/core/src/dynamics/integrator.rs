// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dormand–Prince 5(4) with embedded error control on dense complex
//! matrices. Pure states are `n × 1` matrices.

use faer::{Mat, MatRef};

use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// Take uniform steps of this size with no error control.
    pub fixed_step: Option<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_step: f64::INFINITY,
            min_step: 1e-12,
            fixed_step: None,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_step > 0.0
            && self.min_step > 0.0
            && self.min_step <= self.max_step
            && self.fixed_step.is_none_or(|h| h > 0.0 && h.is_finite());
        if !ok {
            return Err(Error::UnphysicalParameter(format!(
                "invalid integrator settings {self:?}"
            )));
        }
        Ok(())
    }

    /// Same settings with both tolerances divided by two.
    pub fn halved(&self) -> Self {
        Self {
            rel_tol: self.rel_tol / 2.0,
            abs_tol: self.abs_tol / 2.0,
            fixed_step: self.fixed_step.map(|h| h / 2.0),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegratorStats {
    pub accepted: u64,
    pub rejected: u64,
    pub rhs_evals: u64,
    pub min_step: f64,
    pub max_step: f64,
}

impl IntegratorStats {
    fn record(&mut self, h: f64) {
        if self.accepted == 0 || h < self.min_step {
            self.min_step = h;
        }
        if h > self.max_step {
            self.max_step = h;
        }
        self.accepted += 1;
    }

    pub fn merge(&mut self, other: &Self) {
        if other.accepted > 0 {
            if self.accepted == 0 || other.min_step < self.min_step {
                self.min_step = other.min_step;
            }
            self.max_step = self.max_step.max(other.max_step);
        }
        self.accepted += other.accepted;
        self.rejected += other.rejected;
        self.rhs_evals += other.rhs_evals;
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// `y + h Σ cᵢ kᵢ`.
fn combine(y: &Mat<C64>, h: f64, terms: &[(f64, &Mat<C64>)]) -> Mat<C64> {
    let mut out = y.clone();
    for &(c, k) in terms {
        if c != 0.0 {
            let w = h * c;
            for j in 0..out.ncols() {
                for i in 0..out.nrows() {
                    out[(i, j)] += k[(i, j)] * w;
                }
            }
        }
    }
    out
}

/// Adaptive (or fixed-step) propagator for `dy/dt = f(t, y)`.
///
/// The suggested step size survives between calls to [`Stepper::advance`],
/// so integrating over many short output intervals costs no more than one
/// long call.
pub struct Stepper<F> {
    f: F,
    cfg: IntegratorConfig,
    h: Option<f64>,
    k1: Option<(f64, Mat<C64>)>,
    pub stats: IntegratorStats,
}

impl<F> Stepper<F>
where
    F: FnMut(f64, MatRef<'_, C64>) -> Mat<C64>,
{
    pub fn new(f: F, cfg: IntegratorConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            f,
            cfg,
            h: None,
            k1: None,
            stats: IntegratorStats::default(),
        })
    }

    /// Forgets the cached derivative; call after changing the state between
    /// calls to [`Stepper::advance`].
    pub fn invalidate(&mut self) {
        self.k1 = None;
    }

    fn eval(&mut self, t: f64, y: &Mat<C64>) -> Mat<C64> {
        self.stats.rhs_evals += 1;
        (self.f)(t, y.as_ref())
    }

    fn error_norm(&self, y: &Mat<C64>, y_new: &Mat<C64>, err: &Mat<C64>) -> f64 {
        let mut acc = 0.0;
        let n = (y.nrows() * y.ncols()) as f64;
        for j in 0..y.ncols() {
            for i in 0..y.nrows() {
                let scale =
                    self.cfg.abs_tol + self.cfg.rel_tol * y[(i, j)].norm().max(y_new[(i, j)].norm());
                let r = err[(i, j)].norm() / scale;
                acc += r * r;
            }
        }
        (acc / n).sqrt()
    }

    fn initial_step(&mut self, t: f64, y: &Mat<C64>, k1: &Mat<C64>, span: f64) -> f64 {
        let d0 = y.norm_l2();
        let d1 = k1.norm_l2();
        let h = if d0 < 1e-10 || d1 < 1e-10 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        let _ = t;
        h.min(span).min(self.cfg.max_step).max(self.cfg.min_step)
    }

    /// Integrates from `t` to `t_end`, applying `post` to every accepted
    /// state (used for Hermitian symmetrisation).
    pub fn advance(
        &mut self,
        t: f64,
        y: Mat<C64>,
        t_end: f64,
        mut post: impl FnMut(&mut Mat<C64>),
    ) -> Result<Mat<C64>> {
        if t_end <= t {
            return Ok(y);
        }
        if let Some(h) = self.cfg.fixed_step {
            return self.advance_fixed(t, y, t_end, h, post);
        }
        let mut t = t;
        let mut y = y;
        let mut k1 = match self.k1.take() {
            Some((tk, k)) if tk == t => k,
            _ => self.eval(t, &y),
        };
        let mut h = match self.h {
            Some(h) => h,
            None => self.initial_step(t, &y, &k1, t_end - t),
        };
        loop {
            let remaining = t_end - t;
            let last = h >= remaining * (1.0 - 1e-12);
            let step = if last { remaining } else { h };
            let k2 = self.eval(t + C2 * step, &combine(&y, step, &[(A21, &k1)]));
            let k3 = self.eval(t + C3 * step, &combine(&y, step, &[(A31, &k1), (A32, &k2)]));
            let k4 = self.eval(
                t + C4 * step,
                &combine(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = self.eval(
                t + C5 * step,
                &combine(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = self.eval(
                t + step,
                &combine(
                    &y,
                    step,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = combine(
                &y,
                step,
                &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            );
            let t_new = if last { t_end } else { t + step };
            let k7 = self.eval(t_new, &y_new);
            let zero = Mat::<C64>::zeros(y.nrows(), y.ncols());
            let err = combine(
                &zero,
                step,
                &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
            );
            let en = self.error_norm(&y, &y_new, &err);
            if !en.is_finite() {
                return Err(Error::NumericDomain("integrator step"));
            }
            if en <= 1.0 {
                self.stats.record(step);
                t = t_new;
                y = y_new;
                post(&mut y);
                k1 = k7;
                let factor = if en == 0.0 {
                    5.0
                } else {
                    (0.9 * en.powf(-0.2)).clamp(0.2, 5.0)
                };
                // a truncated final step says nothing about the natural step
                if !last || step >= h {
                    h = (step * factor).min(self.cfg.max_step);
                }
                if last {
                    self.h = Some(h);
                    self.k1 = Some((t, k1));
                    return Ok(y);
                }
            } else {
                self.stats.rejected += 1;
                h = step * (0.9 * en.powf(-0.2)).clamp(0.2, 1.0);
                if h < self.cfg.min_step {
                    return Err(Error::Stiffness { t, h });
                }
            }
        }
    }

    fn advance_fixed(
        &mut self,
        t0: f64,
        y: Mat<C64>,
        t_end: f64,
        h: f64,
        mut post: impl FnMut(&mut Mat<C64>),
    ) -> Result<Mat<C64>> {
        let span = t_end - t0;
        let n = (span / h - 1e-9).ceil().max(1.0) as u64;
        let step = span / n as f64;
        let mut y = y;
        for i in 0..n {
            let t = t0 + i as f64 * step;
            let k1 = self.eval(t, &y);
            let k2 = self.eval(t + C2 * step, &combine(&y, step, &[(A21, &k1)]));
            let k3 = self.eval(t + C3 * step, &combine(&y, step, &[(A31, &k1), (A32, &k2)]));
            let k4 = self.eval(
                t + C4 * step,
                &combine(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = self.eval(
                t + C5 * step,
                &combine(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = self.eval(
                t + step,
                &combine(
                    &y,
                    step,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            y = combine(
                &y,
                step,
                &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            );
            post(&mut y);
            self.stats.record(step);
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(z: C64) -> Mat<C64> {
        Mat::from_fn(1, 1, |_, _| z)
    }

    #[test]
    fn exponential_decay() {
        let mut s = Stepper::new(|_t, y: MatRef<'_, C64>| y.to_owned() * faer::Scale(C64::new(-1.0, 0.0)), IntegratorConfig::default()).unwrap();
        let y = s.advance(0.0, scalar(C64::new(1.0, 0.0)), 3.0, |_| {}).unwrap();
        assert!((y[(0, 0)].re - (-3.0f64).exp()).abs() < 1e-8);
        assert!(s.stats.rejected < 5);
    }

    #[test]
    fn oscillation_over_many_calls() {
        let cfg = IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            ..Default::default()
        };
        let mut s = Stepper::new(|_t, y: MatRef<'_, C64>| y.to_owned() * faer::Scale(C64::new(0.0, -2.0)), cfg).unwrap();
        let mut y = scalar(C64::new(1.0, 0.0));
        for k in 0..100 {
            y = s.advance(k as f64 * 0.1, y, (k + 1) as f64 * 0.1, |_| {}).unwrap();
        }
        let exact = C64::from_polar(1.0, -20.0);
        assert!((y[(0, 0)] - exact).norm() < 1e-8);
    }

    #[test]
    fn time_dependent_rhs() {
        // dy/dt = cos t → y = sin t
        let mut s = Stepper::new(
            |t: f64, _y: MatRef<'_, C64>| scalar(C64::new(t.cos(), 0.0)),
            IntegratorConfig::default(),
        )
        .unwrap();
        let y = s.advance(0.0, scalar(C64::new(0.0, 0.0)), 2.0, |_| {}).unwrap();
        assert!((y[(0, 0)].re - 2f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn fixed_step_is_fifth_order() {
        let err = |h: f64| {
            let cfg = IntegratorConfig {
                fixed_step: Some(h),
                ..Default::default()
            };
            let mut s = Stepper::new(|_t, y: MatRef<'_, C64>| y.to_owned() * faer::Scale(C64::new(-1.0, 0.0)), cfg).unwrap();
            let y = s.advance(0.0, scalar(C64::new(1.0, 0.0)), 1.0, |_| {}).unwrap();
            (y[(0, 0)].re - (-1.0f64).exp()).abs()
        };
        let ratio = err(0.2) / err(0.1);
        assert!(ratio > 20.0 && ratio < 50.0, "{ratio}");
    }

    #[test]
    fn stiffness_is_reported() {
        let cfg = IntegratorConfig {
            min_step: 1e-3,
            max_step: 1.0,
            ..Default::default()
        };
        let mut s = Stepper::new(|_t, y: MatRef<'_, C64>| y.to_owned() * faer::Scale(C64::new(-1e6, 0.0)), cfg).unwrap();
        let res = s.advance(0.0, scalar(C64::new(1.0, 0.0)), 1.0, |_| {});
        assert!(matches!(res, Err(Error::Stiffness { .. })));
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = IntegratorConfig {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(Stepper::new(|_t, y: MatRef<'_, C64>| y.to_owned(), cfg).is_err());
    }
}
