// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::{Error, Result};

/// Labelled `(time, value)` rows with strictly increasing, finite times and
/// finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    label: String,
    units: String,
    rows: Vec<(f64, f64)>,
}

impl TimeSeries {
    pub fn new(label: impl Into<String>, units: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            units: units.into(),
            rows: Vec::new(),
        }
    }

    pub fn from_rows(
        label: impl Into<String>,
        units: impl Into<String>,
        rows: impl IntoIterator<Item = (f64, f64)>,
    ) -> Result<Self> {
        let mut s = Self::new(label, units);
        for (t, v) in rows {
            s.push(t, v)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, t: f64, value: f64) -> Result<()> {
        let fail = |reason: String| Error::Series {
            label: self.label.clone(),
            reason,
        };
        if !t.is_finite() || !value.is_finite() {
            return Err(fail(format!("non-finite row ({t}, {value})")));
        }
        if let Some(&(last, _)) = self.rows.last() {
            if t <= last {
                return Err(fail(format!("time {t} does not follow {last}")));
            }
        }
        self.rows.push((t, value));
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Time units, e.g. `"1/g"`.
    pub fn units(&self) -> &str {
        &self.units
    }

    pub fn rows(&self) -> &[(f64, f64)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.1)
    }

    pub fn first(&self) -> Option<(f64, f64)> {
        self.rows.first().copied()
    }

    pub fn last(&self) -> Option<(f64, f64)> {
        self.rows.last().copied()
    }

    /// Value at the sample nearest to `t`.
    pub fn nearest(&self, t: f64) -> Option<(f64, f64)> {
        self.rows
            .iter()
            .copied()
            .min_by(|a, b| (a.0 - t).abs().total_cmp(&(b.0 - t).abs()))
    }

    /// Rows with `t0 ≤ t ≤ t1`.
    pub fn window(&self, t0: f64, t1: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.rows
            .iter()
            .copied()
            .filter(move |&(t, _)| t >= t0 && t <= t1)
    }

    /// Multiplies every time by `factor > 0` and relabels the units.
    pub fn rescale_time(&self, factor: f64, units: impl Into<String>) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Series {
                label: self.label.clone(),
                reason: format!("time scale factor {factor}"),
            });
        }
        Self::from_rows(
            self.label.clone(),
            units,
            self.rows.iter().map(|&(t, v)| (t * factor, v)),
        )
    }

    /// `max |self − other|` over shared sample times `t ≤ t_max`; the two
    /// series must have been sampled on the same grid.
    pub fn max_abs_difference(&self, other: &Self, t_max: f64) -> Result<f64> {
        let mut worst = 0.0f64;
        let mut j = 0;
        let mut matched = 0;
        for &(t, v) in self.rows.iter().filter(|r| r.0 <= t_max) {
            while j < other.rows.len() && other.rows[j].0 < t - 1e-9 * t.abs().max(1.0) {
                j += 1;
            }
            if j < other.rows.len() && (other.rows[j].0 - t).abs() <= 1e-9 * t.abs().max(1.0) {
                worst = worst.max((v - other.rows[j].1).abs());
                matched += 1;
            }
        }
        if matched == 0 {
            return Err(Error::Series {
                label: format!("{} vs {}", self.label, other.label),
                reason: "no shared sample times".into(),
            });
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unordered_and_non_finite() {
        let mut s = TimeSeries::new("x", "1/g");
        s.push(0.0, 1.0).unwrap();
        assert!(s.push(0.0, 2.0).is_err());
        assert!(s.push(1.0, f64::NAN).is_err());
        assert!(s.push(f64::INFINITY, 1.0).is_err());
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn difference_on_shared_grid() {
        let a = TimeSeries::from_rows("a", "t", [(0.0, 1.0), (1.0, 2.0), (2.0, 3.0)]).unwrap();
        let b = TimeSeries::from_rows("b", "t", [(0.0, 1.5), (1.0, 2.0), (2.0, 5.0)]).unwrap();
        assert_eq!(a.max_abs_difference(&b, 1.0).unwrap(), 0.5);
        assert_eq!(a.max_abs_difference(&b, 2.0).unwrap(), 2.0);
    }

    #[test]
    fn rescaled_times() {
        let a = TimeSeries::from_rows("a", "1/lambda", [(0.0, 1.0), (2.0, 2.0)]).unwrap();
        let b = a.rescale_time(0.5, "1/g").unwrap();
        assert_eq!(b.rows(), &[(0.0, 1.0), (1.0, 2.0)]);
        assert_eq!(b.units(), "1/g");
        assert!(a.rescale_time(0.0, "x").is_err());
    }
}
