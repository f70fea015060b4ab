// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Fock space: dimension {0} (need at least 2)")]
    InvalidSpace(usize),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("non-finite value encountered in {0}")]
    NumericDomain(&'static str),

    #[error("unphysical parameter: {0}")]
    UnphysicalParameter(String),

    #[error("parameter constraint violated: {relation} ({detail})")]
    Constraint { relation: &'static str, detail: String },

    #[error("truncation tail population {tail:.3e} exceeds {limit:.1e} in {context}")]
    Truncation { tail: f64, limit: f64, context: String },

    #[error("statistic undefined: {0}")]
    UndefinedStatistic(String),

    #[error("index ({row}, {col}) out of range for dimension {dim}")]
    IndexOutOfRange { row: usize, col: usize, dim: usize },

    #[error("step size underflow at t = {t:.6e} (h = {h:.3e}); problem may be stiff")]
    Stiffness { t: f64, h: f64 },

    #[error(
        "positivity violated at t = {t:.6e}: minimum eigenvalue {min_eigenvalue:.3e}; \
         try tightening the integrator tolerances"
    )]
    Positivity { t: f64, min_eigenvalue: f64 },

    #[error("steady state is not unique: null space dimension {0}")]
    AmbiguousSteadyState(usize),

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),

    #[error("time series '{label}': {reason}")]
    Series { label: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
