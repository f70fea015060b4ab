// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

use faer::Mat;

use super::series::TimeSeries;
use crate::hilbert::DensityMatrix;
use crate::models::{superoperator, Generator};
use crate::{Error, Result, C64};

/// Largest dimension accepted by [`liouvillian_steady_state`].
pub const SUPEROPERATOR_DIM_LIMIT: usize = 24;

/// Outcome of [`detect_steady_state`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub reached: bool,
    /// Start of the first trailing window after which every later window
    /// has spread `≤ eps`.
    pub t_steady: Option<f64>,
    /// `max − min` over the last window of the series.
    pub final_spread: f64,
    /// Mean over the last window.
    pub final_mean: f64,
}

/// Finds the earliest window end `t` such that the spread of the series
/// over `[s − window, s]` stays `≤ eps` for every sample `s ≥ t`, and
/// reports `t − window`.
pub fn detect_steady_state(series: &TimeSeries, window: f64, eps: f64) -> Result<SteadyState> {
    let rows = series.rows();
    let fail = |reason: String| Error::Series {
        label: series.label().to_string(),
        reason,
    };
    if !(window > 0.0 && eps >= 0.0) {
        return Err(fail(format!("window {window}, eps {eps}")));
    }
    let (Some(first), Some(last)) = (series.first(), series.last()) else {
        return Err(fail("empty series".into()));
    };
    let slack = 1e-9 * window;
    if last.0 - first.0 < 2.0 * window - slack {
        return Err(fail(format!(
            "series spans {} but two windows of {window} are needed",
            last.0 - first.0
        )));
    }
    let spreads: Vec<Option<(f64, f64)>> = rows
        .iter()
        .map(|&(t, _)| {
            if t - first.0 < window - slack {
                return None;
            }
            let (mut lo, mut hi, mut sum, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
            for (_, v) in series.window(t - window - slack, t) {
                lo = lo.min(v);
                hi = hi.max(v);
                sum += v;
                n += 1;
            }
            Some((hi - lo, sum / n as f64))
        })
        .collect();
    let (final_spread, final_mean) = spreads.last().copied().flatten().expect("series covers a window");
    let mut start = None;
    for (k, s) in spreads.iter().enumerate().rev() {
        match s {
            Some((spread, _)) if *spread <= eps => start = Some(k),
            _ => break,
        }
    }
    let t_steady = start.map(|k| (rows[k].0 - window).max(first.0));
    if t_steady.is_none() {
        log::info!(
            "{}: no steady state (final window spread {final_spread:.3e} > {eps:.3e})",
            series.label()
        );
    }
    Ok(SteadyState {
        reached: t_steady.is_some(),
        t_steady,
        final_spread,
        final_mean,
    })
}

/// Fixed point of a generator from the null space of its dense
/// superoperator.
pub fn liouvillian_steady_state(generator: &dyn Generator, dim: usize) -> Result<DensityMatrix> {
    if generator.dim() != dim {
        return Err(Error::InvalidShape(format!(
            "generator of dimension {} queried at {dim}",
            generator.dim()
        )));
    }
    if dim > SUPEROPERATOR_DIM_LIMIT {
        return Err(Error::InvalidShape(format!(
            "superoperator path is limited to dim <= {SUPEROPERATOR_DIM_LIMIT}, got {dim}"
        )));
    }
    let sup = superoperator(generator);
    let svd = sup
        .as_ref()
        .svd()
        .map_err(|e| Error::LinearAlgebra(format!("{e:?}")))?;
    let s = svd.S().column_vector();
    let n = s.nrows();
    let s_max = s[0].re;
    let tol = 1e-9 * s_max.max(1e-300);
    let null = (0..n).filter(|&i| s[i].re <= tol).count();
    if null > 1 {
        return Err(Error::AmbiguousSteadyState(null));
    }
    if null == 0 {
        log::warn!(
            "no exact null vector; smallest singular value {:.3e} of {:.3e}",
            s[n - 1].re,
            s_max
        );
    }
    let v = svd.V().col(n - 1);
    let mut rho = Mat::<C64>::from_fn(dim, dim, |i, j| v[i + j * dim]);
    let tr: C64 = (0..dim).map(|i| rho[(i, i)]).sum();
    if tr.norm() < 1e-12 {
        return Err(Error::LinearAlgebra("null vector is traceless".into()));
    }
    rho *= faer::Scale(tr.inv());
    let mut state = DensityMatrix::from_mat_unchecked(rho)?;
    state.symmetrize();
    DensityMatrix::new(state.into_mat())
}
