// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Truncated Fock-space linear algebra.
//!
//! Everything is dense. A field mode keeps the levels `|0⟩ … |dim−1⟩`; the
//! ladder operators are the exact matrix elements of `a` and `a†` restricted
//! to that block, so canonical relations hold everywhere except on the last
//! level.
//!
//! Joint atom-field objects are atom-major: `tensor(atom_op, field_op)` and
//! `|s⟩ ⊗ |n⟩ ↦ s * d_field + n`.

mod expm;
mod state;

use std::ops::{Add, Mul, Neg, Sub};

use faer::prelude::*;
use faer::{Col, Mat};

pub use expm::expm;
pub use state::{partial_trace, DensityMatrix, StateVector, Subsystem};

use crate::{Error, Result, C64};

/// Population allowed in the top tenth of the retained levels before a run
/// is declared truncation-limited.
pub const TAIL_LIMIT: f64 = 1e-6;

/// Tail population above which operator constructors log a warning.
pub const TAIL_WARN: f64 = 1e-8;

/// Number of retained Fock levels for a single bosonic mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockSpace {
    dim: usize,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidSpace(dim));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Population held by the top `⌈dim/10⌉` levels of a population vector.
pub fn tail_population(populations: &[f64]) -> f64 {
    let dim = populations.len();
    let top = dim.div_ceil(10).max(1);
    populations[dim - top..].iter().sum()
}

/// Dense square complex matrix acting on a truncated Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    mat: Mat<C64>,
}

impl Operator {
    pub fn from_mat(mat: Mat<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::InvalidShape(format!(
                "operator must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { mat })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            mat: Mat::from_fn(dim, dim, f),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: Mat::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: Mat::identity(dim, dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_mat(&self) -> MatRef<'_, C64> {
        self.mat.as_ref()
    }

    pub fn into_mat(self) -> Mat<C64> {
        self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint().to_owned(),
        }
    }

    pub fn scale(&self, z: C64) -> Self {
        Self {
            mat: &self.mat * Scale(z),
        }
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self {
            mat: &self.mat * &other.mat - &other.mat * &self.mat,
        }
    }

    /// Largest entrywise deviation `|M − M†|`.
    pub fn hermiticity_error(&self) -> f64 {
        (&self.mat - self.mat.adjoint()).as_ref().norm_max()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    pub fn norm_max(&self) -> f64 {
        self.mat.as_ref().norm_max()
    }

    pub fn is_finite(&self) -> bool {
        self.mat.as_ref().norm_max().is_finite()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Matrix-vector product without renormalisation.
    pub fn apply_to(&self, amps: ColRef<'_, C64>) -> Col<C64> {
        &self.mat * amps
    }

    pub fn apply(&self, psi: &StateVector) -> Col<C64> {
        self.apply_to(psi.amplitudes())
    }

    pub fn exp(&self) -> Result<Self> {
        Ok(Self {
            mat: expm(self.mat.as_ref())?,
        })
    }

    /// Restriction to the leading `k×k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        Self {
            mat: self.mat.as_ref().submatrix(0, 0, k, k).to_owned(),
        }
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat * &rhs.mat,
        }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale_real(-1.0)
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        &self + &rhs
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        &self - &rhs
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        &self * &rhs
    }
}

/// Field annihilation operator, `⟨n−1|a|n⟩ = √n`.
pub fn annihilation(space: FockSpace) -> Operator {
    Operator::from_fn(space.dim(), |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

pub fn creation(space: FockSpace) -> Operator {
    annihilation(space).adjoint()
}

/// `a†a`, built directly as `diag(0, 1, …, dim−1)`.
pub fn number(space: FockSpace) -> Operator {
    let diag: Vec<f64> = (0..space.dim()).map(|n| n as f64).collect();
    Operator::from_real_diagonal(&diag)
}

/// Photon-number parity `exp(iπ a†a) = diag(+1, −1, +1, …)`.
pub fn parity(space: FockSpace) -> Operator {
    let diag: Vec<f64> = (0..space.dim())
        .map(|n| if n % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    Operator::from_real_diagonal(&diag)
}

pub fn identity(space: FockSpace) -> Operator {
    Operator::identity(space.dim())
}

/// `X₁ = (a + a†)/2`.
pub fn quadrature_x1(space: FockSpace) -> Operator {
    let a = annihilation(space);
    (&a + &a.adjoint()).scale_real(0.5)
}

/// `X₂ = (a − a†)/2i`.
pub fn quadrature_x2(space: FockSpace) -> Operator {
    let a = annihilation(space);
    (&a - &a.adjoint()).scale(C64::new(0.0, -0.5))
}

/// Exponentiates a generator built from `a` on a space twice as large and
/// keeps the leading `dim × dim` block, so the returned entries are those
/// of the untruncated operator rather than of the exponential of a
/// truncated generator (which is distorted near the cut).
fn exp_padded(space: FockSpace, generator: impl Fn(Operator) -> Operator) -> Result<Operator> {
    let padded = FockSpace::new(2 * space.dim() + 16)?;
    let full = generator(annihilation(padded)).exp()?;
    Ok(full.leading_block(space.dim()))
}

fn warn_on_tail(op: &Operator, what: &str) {
    let pops: Vec<f64> = (0..op.dim()).map(|n| op.get(n, 0).norm_sqr()).collect();
    let tail = tail_population(&pops);
    if tail > TAIL_WARN {
        log::warn!(
            "{what}: tail population {tail:.2e} of the transformed vacuum exceeds {TAIL_WARN:.0e} \
             at dim {}",
            op.dim()
        );
    }
}

/// Displacement `D(α) = exp(αa† − α*a)`, as the leading block of the
/// untruncated operator (not exactly unitary at finite `dim`).
///
/// Accurate while `|α|² ≪ dim`; a warning is logged when `D(α)|0⟩` leaks
/// into the top levels.
pub fn displacement(space: FockSpace, alpha: C64) -> Result<Operator> {
    let d = exp_padded(space, |a| &a.adjoint().scale(alpha) - &a.scale(alpha.conj()))?;
    warn_on_tail(&d, "displacement");
    Ok(d)
}

/// Squeeze operator `S(ξ) = exp[(ξ*a² − ξa†²)/2]`, `ξ = r e^{iφ}`.
///
/// With this normalisation `S(r)|0⟩` has `⟨a†a⟩ = sinh² r` and is
/// annihilated by `a + tanh(r) a†` for real `r`. Accurate while
/// `e^{2|ξ|} ≪ dim`.
pub fn squeeze(space: FockSpace, xi: C64) -> Result<Operator> {
    let s = exp_padded(space, |a| {
        let a2 = &a * &a;
        let ad2 = a2.adjoint();
        (&a2.scale(xi.conj()) - &ad2.scale(xi)).scale_real(0.5)
    })?;
    warn_on_tail(&s, "squeeze");
    Ok(s)
}

/// Atomic transition operator `σ_rs = |r⟩⟨s|` on a `levels`-level atom.
pub fn atom_transition(levels: usize, r: usize, s: usize) -> Result<Operator> {
    if r >= levels || s >= levels {
        return Err(Error::IndexOutOfRange {
            row: r,
            col: s,
            dim: levels,
        });
    }
    Ok(Operator::from_fn(levels, |i, j| {
        if i == r && j == s {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Kronecker product `left ⊗ right`; with `left` the atom this is the
/// atom-major joint-space convention used everywhere in the crate.
pub fn tensor(left: &Operator, right: &Operator) -> Operator {
    let n = left.dim() * right.dim();
    let mut mat = Mat::<C64>::zeros(n, n);
    faer::linalg::kron::kron(mat.as_mut(), left.as_mat(), right.as_mat());
    Operator { mat }
}
