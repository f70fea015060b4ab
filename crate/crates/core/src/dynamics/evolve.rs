// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

use faer::{Mat, MatRef};

use super::integrator::{IntegratorConfig, IntegratorStats, Stepper};
use super::series::TimeSeries;
use crate::hilbert::{DensityMatrix, StateVector};
use crate::models::{Generator, HamiltonianSource};
use crate::{Error, Result, C64};

/// Runs abort when the minimum eigenvalue of a sampled state drops below
/// this.
pub const POSITIVITY_LIMIT: f64 = 1e-6;

/// Named function of a state snapshot. `None` marks an undefined sample,
/// which is skipped in the series.
pub struct Observer<'a, S> {
    label: String,
    eval: ObserverFn<'a, S>,
}

type ObserverFn<'a, S> = Box<dyn Fn(&S) -> Option<f64> + 'a>;

impl<'a, S> Observer<'a, S> {
    pub fn new(label: impl Into<String>, f: impl Fn(&S) -> f64 + 'a) -> Self {
        Self {
            label: label.into(),
            eval: Box::new(move |s| Some(f(s))),
        }
    }

    pub fn partial(label: impl Into<String>, f: impl Fn(&S) -> Option<f64> + 'a) -> Self {
        Self {
            label: label.into(),
            eval: Box::new(f),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, state: &S) -> Option<f64> {
        (self.eval)(state)
    }
}

/// Uniform output grid `0, dt, 2dt, …` up to and including `t_end`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampling {
    pub dt: f64,
    pub t_end: f64,
    pub units: String,
}

impl Sampling {
    pub fn new(dt: f64, t_end: f64, units: impl Into<String>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite() && t_end >= 0.0 && t_end.is_finite()) {
            return Err(Error::UnphysicalParameter(format!(
                "sampling dt = {dt}, t_end = {t_end}"
            )));
        }
        Ok(Self {
            dt,
            t_end,
            units: units.into(),
        })
    }

    pub fn times(&self) -> Vec<f64> {
        let n = (self.t_end / self.dt + 1e-9).floor() as usize;
        let mut out: Vec<f64> = (0..=n).map(|k| k as f64 * self.dt).collect();
        let last = out[out.len() - 1];
        if self.t_end - last > 1e-9 * self.t_end.max(1.0) {
            out.push(self.t_end);
        }
        out
    }
}

/// Numerical health of a run, all maxima over the sampled states.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    pub max_norm_drift: f64,
    pub max_trace_drift: f64,
    pub max_hermiticity_drift: f64,
    pub min_eigenvalue: f64,
    pub max_tail: f64,
    /// Largest correction applied when re-unitarising a one-period
    /// propagator.
    pub max_unitarity_correction: f64,
}

impl Diagnostics {
    fn fresh() -> Self {
        Self {
            min_eigenvalue: f64::INFINITY,
            ..Self::default()
        }
    }

    pub fn merge(&mut self, other: &Self) {
        self.max_norm_drift = self.max_norm_drift.max(other.max_norm_drift);
        self.max_trace_drift = self.max_trace_drift.max(other.max_trace_drift);
        self.max_hermiticity_drift = self.max_hermiticity_drift.max(other.max_hermiticity_drift);
        self.min_eigenvalue = self.min_eigenvalue.min(other.min_eigenvalue);
        self.max_tail = self.max_tail.max(other.max_tail);
        self.max_unitarity_correction = self
            .max_unitarity_correction
            .max(other.max_unitarity_correction);
    }
}

#[derive(Debug, Clone)]
pub struct Evolution<S> {
    pub series: Vec<TimeSeries>,
    pub final_state: S,
    pub final_time: f64,
    pub stats: IntegratorStats,
    pub diagnostics: Diagnostics,
}

impl<S> Evolution<S> {
    pub fn series(&self, label: &str) -> Option<&TimeSeries> {
        self.series.iter().find(|s| s.label() == label)
    }
}

pub(crate) struct Recorder {
    pub series: Vec<TimeSeries>,
}

impl Recorder {
    pub fn new<S>(observers: &[Observer<'_, S>], units: &str) -> Self {
        Self {
            series: observers
                .iter()
                .map(|o| TimeSeries::new(o.label(), units))
                .collect(),
        }
    }

    pub fn record<S>(&mut self, t: f64, state: &S, observers: &[Observer<'_, S>]) -> Result<()> {
        for (series, obs) in self.series.iter_mut().zip(observers) {
            if let Some(v) = obs.eval(state) {
                series.push(t, v)?;
            }
        }
        Ok(())
    }
}

fn column(psi: &StateVector) -> Mat<C64> {
    let a = psi.amplitudes();
    Mat::from_fn(psi.dim(), 1, |i, _| a[i])
}

fn state_of(y: &Mat<C64>) -> StateVector {
    StateVector::from_col_unchecked(y.col(0).to_owned())
}

fn check_dim(expected: usize, got: usize, what: &str) -> Result<()> {
    if expected != got {
        return Err(Error::InvalidShape(format!(
            "{what}: state of dimension {got}, generator of dimension {expected}"
        )));
    }
    Ok(())
}

fn minus_i_times(h: MatRef<'_, C64>, y: MatRef<'_, C64>) -> Mat<C64> {
    let hy = h * y;
    Mat::from_fn(hy.nrows(), hy.ncols(), |i, j| {
        let z = hy[(i, j)];
        C64::new(z.im, -z.re)
    })
}

/// Integrates `i dψ/dt = H(t)ψ` with the adaptive stepper, sampling the
/// observers on a uniform grid. Norm drift is reported, not corrected.
pub fn evolve_pure(
    h: &dyn HamiltonianSource,
    psi0: &StateVector,
    sampling: &Sampling,
    cfg: &IntegratorConfig,
    observers: &[Observer<'_, StateVector>],
) -> Result<Evolution<StateVector>> {
    check_dim(h.dim(), psi0.dim(), "pure evolution")?;
    let fixed = h.is_static().then(|| h.at(0.0));
    let rhs = |t: f64, y: MatRef<'_, C64>| match &fixed {
        Some(m) => minus_i_times(m.as_ref(), y),
        None => minus_i_times(h.at(t).as_ref(), y),
    };
    let mut stepper = Stepper::new(rhs, *cfg)?;
    let mut rec = Recorder::new(observers, &sampling.units);
    let mut diag = Diagnostics::fresh();
    let mut y = column(psi0);
    let mut t = 0.0;
    for ts in sampling.times() {
        y = stepper.advance(t, y, ts, |_| {})?;
        t = ts;
        let psi = state_of(&y);
        diag.max_norm_drift = diag.max_norm_drift.max((psi.norm() - 1.0).abs());
        diag.max_tail = diag.max_tail.max(psi.tail_population());
        rec.record(t, &psi, observers)?;
    }
    diag.min_eigenvalue = 0.0;
    if diag.max_norm_drift > 1e-8 {
        log::warn!("pure evolution norm drift {:.2e}", diag.max_norm_drift);
    }
    Ok(Evolution {
        series: rec.series,
        final_state: state_of(&y),
        final_time: t,
        stats: stepper.stats,
        diagnostics: diag,
    })
}

/// Nearest unitary `W V†` from the SVD `U = W Σ V†`, and `max|σ − 1|`.
fn unitarize(u: &Mat<C64>) -> Result<(Mat<C64>, f64)> {
    let svd = u
        .as_ref()
        .svd()
        .map_err(|e| Error::LinearAlgebra(format!("{e:?}")))?;
    let s = svd.S().column_vector();
    let dev = (0..s.nrows())
        .map(|i| (s[i].re - 1.0).abs())
        .fold(0.0, f64::max);
    Ok((svd.U() * svd.V().adjoint(), dev))
}

/// One-period propagator `U(T)` of a periodic Hamiltonian, re-unitarised.
pub fn period_propagator(
    h: &dyn HamiltonianSource,
    cfg: &IntegratorConfig,
) -> Result<(Mat<C64>, f64, IntegratorStats, f64)> {
    let period = h.period().ok_or_else(|| {
        Error::UnphysicalParameter("Hamiltonian has no common period".into())
    })?;
    let n = h.dim();
    let rhs = |t: f64, y: MatRef<'_, C64>| minus_i_times(h.at(t).as_ref(), y);
    let mut stepper = Stepper::new(rhs, *cfg)?;
    let u = stepper.advance(0.0, Mat::<C64>::identity(n, n), period, |_| {})?;
    let (u, dev) = unitarize(&u)?;
    Ok((u, period, stepper.stats, dev))
}

/// Stroboscopic evolution of a periodic Hamiltonian: the one-period
/// propagator is integrated once and applied repeatedly. Samples land on
/// the multiple of the period nearest to each requested time (at least one
/// period apart), so the actual sample times are reported in the series.
pub fn evolve_periodic(
    h: &dyn HamiltonianSource,
    psi0: &StateVector,
    sampling: &Sampling,
    cfg: &IntegratorConfig,
    observers: &[Observer<'_, StateVector>],
) -> Result<Evolution<StateVector>> {
    check_dim(h.dim(), psi0.dim(), "periodic evolution")?;
    let (u_period, period, stats, dev) = period_propagator(h, cfg)?;
    let per_sample = ((sampling.dt / period).round() as usize).max(1);
    let mut u_sample = u_period.clone();
    for _ in 1..per_sample {
        u_sample = &u_period * &u_sample;
    }
    let n_samples = (sampling.t_end / (per_sample as f64 * period) + 1e-9).floor() as usize;
    let mut rec = Recorder::new(observers, &sampling.units);
    let mut diag = Diagnostics::fresh();
    diag.max_unitarity_correction = dev;
    let mut y = column(psi0);
    let mut t = 0.0;
    for k in 0..=n_samples {
        if k > 0 {
            y = &u_sample * &y;
            t = (k * per_sample) as f64 * period;
        }
        let psi = state_of(&y);
        diag.max_norm_drift = diag.max_norm_drift.max((psi.norm() - 1.0).abs());
        diag.max_tail = diag.max_tail.max(psi.tail_population());
        rec.record(t, &psi, observers)?;
    }
    diag.min_eigenvalue = 0.0;
    Ok(Evolution {
        series: rec.series,
        final_state: state_of(&y),
        final_time: t,
        stats,
        diagnostics: diag,
    })
}

fn hermitize(m: &mut Mat<C64>) -> f64 {
    let n = m.nrows();
    let mut drift = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            let a = m[(i, j)];
            let b = m[(j, i)].conj();
            drift = drift.max((a - b).norm());
            let avg = (a + b) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    drift
}

/// Checks a sampled density matrix and folds it into the diagnostics.
pub(crate) fn inspect(rho: &DensityMatrix, t: f64, trace0: f64, diag: &mut Diagnostics) -> Result<()> {
    let min = rho.min_eigenvalue()?;
    diag.min_eigenvalue = diag.min_eigenvalue.min(min);
    if min < -POSITIVITY_LIMIT {
        return Err(Error::Positivity {
            t,
            min_eigenvalue: min,
        });
    }
    diag.max_trace_drift = diag.max_trace_drift.max((rho.trace().re - trace0).abs());
    diag.max_tail = diag.max_tail.max(rho.tail_population());
    Ok(())
}

/// Integrates `dρ/dt = L ρ`. The state is re-symmetrised after every
/// accepted step (the removed anti-Hermitian part is reported as
/// `max_hermiticity_drift`), and positivity is checked at each sample.
pub fn evolve_lindblad(
    generator: &dyn Generator,
    rho0: &DensityMatrix,
    sampling: &Sampling,
    cfg: &IntegratorConfig,
    observers: &[Observer<'_, DensityMatrix>],
) -> Result<Evolution<DensityMatrix>> {
    check_dim(generator.dim(), rho0.dim(), "Lindblad evolution")?;
    let rhs = |_t: f64, y: MatRef<'_, C64>| generator.apply(y);
    let mut stepper = Stepper::new(rhs, *cfg)?;
    let mut rec = Recorder::new(observers, &sampling.units);
    let mut diag = Diagnostics::fresh();
    let trace0 = rho0.trace().re;
    let mut y = rho0.as_mat().to_owned();
    let mut t = 0.0;
    let mut herm = 0.0f64;
    for ts in sampling.times() {
        y = stepper.advance(t, y, ts, |m| herm = herm.max(hermitize(m)))?;
        t = ts;
        let rho = DensityMatrix::from_mat_unchecked(y.clone())?;
        inspect(&rho, t, trace0, &mut diag)?;
        rec.record(t, &rho, observers)?;
    }
    diag.max_hermiticity_drift = herm;
    if herm > 0.0 {
        log::debug!("Lindblad evolution: largest symmetrisation {herm:.2e}");
    }
    Ok(Evolution {
        series: rec.series,
        final_state: DensityMatrix::from_mat_unchecked(y)?,
        final_time: t,
        stats: stepper.stats,
        diagnostics: diag,
    })
}
