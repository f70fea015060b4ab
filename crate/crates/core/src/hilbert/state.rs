// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

use faer::prelude::*;
use faer::{Col, Mat, Side};

use super::{tail_population, FockSpace, Operator};
use crate::{Error, Result, C64};

const NORM_TOL: f64 = 1e-10;
pub(crate) const TRACE_TOL: f64 = 1e-8;
pub(crate) const DENSITY_HERMITIAN_TOL: f64 = 1e-10;
pub(crate) const POSITIVITY_TOL: f64 = 1e-8;

/// Normalised pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Col<C64>,
}

impl StateVector {
    /// Normalises `amps`; fails on a zero or non-finite vector.
    pub fn new(amps: Col<C64>) -> Result<Self> {
        let norm = amps.as_ref().norm_l2();
        if !norm.is_finite() {
            return Err(Error::NumericDomain("state vector amplitudes"));
        }
        if norm == 0.0 {
            return Err(Error::InvalidShape("zero state vector".into()));
        }
        Ok(Self {
            amps: amps * Scale(C64::new(1.0 / norm, 0.0)),
        })
    }

    pub fn from_amplitudes(amps: &[C64]) -> Result<Self> {
        Self::new(Col::from_fn(amps.len(), |i| amps[i]))
    }

    /// Wraps amplitudes that are already normalised (within 1e−10).
    ///
    /// Panics otherwise; use [`StateVector::new`] for arbitrary input.
    pub fn from_col(amps: Col<C64>) -> Self {
        let norm = amps.as_ref().norm_l2();
        assert!(
            (norm - 1.0).abs() <= NORM_TOL,
            "StateVector::from_col needs a normalised vector, norm = {norm}"
        );
        Self { amps }
    }

    /// Wraps integrator output whose norm may have drifted slightly.
    pub(crate) fn from_col_unchecked(amps: Col<C64>) -> Self {
        Self { amps }
    }

    /// Unit vector `|index⟩` in a space of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange {
                row: index,
                col: 0,
                dim,
            });
        }
        Ok(Self {
            amps: Col::from_fn(dim, |i| C64::new(if i == index { 1.0 } else { 0.0 }, 0.0)),
        })
    }

    pub fn fock(space: FockSpace, n: usize) -> Result<Self> {
        Self::basis(space.dim(), n)
    }

    pub fn dim(&self) -> usize {
        self.amps.nrows()
    }

    pub fn amplitudes(&self) -> ColRef<'_, C64> {
        self.amps.as_ref()
    }

    pub fn amplitude(&self, n: usize) -> C64 {
        self.amps[n]
    }

    pub fn norm(&self) -> f64 {
        self.amps.as_ref().norm_l2()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        inner(self.amps.as_ref(), other.amps.as_ref())
    }

    /// `⟨ψ|O|ψ⟩`.
    pub fn expectation(&self, op: &Operator) -> C64 {
        inner(self.amps.as_ref(), op.apply(self).as_ref())
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let d = other.dim();
        Self {
            amps: Col::from_fn(self.dim() * d, |k| self.amps[k / d] * other.amps[k % d]),
        }
    }

    /// Rotates the global phase so the first amplitude with modulus above
    /// `1e-14` is real and positive.
    pub fn with_phase_convention(mut self) -> Self {
        if let Some(first) = (0..self.dim())
            .map(|i| self.amps[i])
            .find(|z| z.norm() > 1e-14)
        {
            let phase = first.conj() / first.norm();
            self.amps = &self.amps * Scale(phase);
        }
        self
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.amps[i].norm_sqr()).collect()
    }

    pub fn tail_population(&self) -> f64 {
        tail_population(&self.populations())
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

pub(crate) fn inner(bra: ColRef<'_, C64>, ket: ColRef<'_, C64>) -> C64 {
    (0..bra.nrows()).map(|i| bra[i].conj() * ket[i]).sum()
}

/// Which factor of an atom ⊗ field state to trace out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Atom,
    Field,
}

/// Density matrix. [`DensityMatrix::new`] checks unit trace, Hermiticity
/// and positivity; integrators build intermediate states unchecked.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: Mat<C64>,
}

impl DensityMatrix {
    pub fn new(mat: Mat<C64>) -> Result<Self> {
        let rho = Self::from_mat_unchecked(mat)?;
        let tr = rho.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidShape(format!(
                "density matrix trace {tr} differs from 1"
            )));
        }
        let herm = rho.hermiticity_error();
        if herm > DENSITY_HERMITIAN_TOL {
            return Err(Error::InvalidShape(format!(
                "density matrix not Hermitian (deviation {herm:.2e})"
            )));
        }
        let min = rho.min_eigenvalue()?;
        if min < -POSITIVITY_TOL {
            return Err(Error::Positivity {
                t: 0.0,
                min_eigenvalue: min,
            });
        }
        Ok(rho)
    }

    /// Square and finite, nothing else.
    pub fn from_mat_unchecked(mat: Mat<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::InvalidShape(format!(
                "density matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if !mat.as_ref().norm_max().is_finite() {
            return Err(Error::NumericDomain("density matrix entries"));
        }
        Ok(Self { mat })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let a = psi.amplitudes();
        Self {
            mat: Mat::from_fn(psi.dim(), psi.dim(), |i, j| a[i] * a[j].conj()),
        }
    }

    /// Diagonal state; `weights` must be non-negative and sum to one.
    pub fn from_diagonal(weights: &[f64]) -> Result<Self> {
        let mat = Mat::from_fn(weights.len(), weights.len(), |i, j| {
            C64::new(if i == j { weights[i] } else { 0.0 }, 0.0)
        });
        Self::new(mat)
    }

    /// Convex mixture `Σ pᵢ |ψᵢ⟩⟨ψᵢ|`.
    pub fn mixture(components: &[(f64, StateVector)]) -> Result<Self> {
        let dim = components
            .first()
            .map(|(_, s)| s.dim())
            .ok_or_else(|| Error::InvalidShape("empty mixture".into()))?;
        let mut mat = Mat::<C64>::zeros(dim, dim);
        for (p, psi) in components {
            if psi.dim() != dim {
                return Err(Error::InvalidShape("mixture components differ in dimension".into()));
            }
            mat += DensityMatrix::from_pure(psi).mat * Scale(C64::new(*p, 0.0));
        }
        Self::new(mat)
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

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.mat - self.mat.adjoint()).as_ref().norm_max()
    }

    /// Replaces `ρ` by `(ρ + ρ†)/2` and returns the removed deviation.
    pub fn symmetrize(&mut self) -> f64 {
        let drift = self.hermiticity_error();
        let sym = (&self.mat + self.mat.adjoint()) * Scale(C64::new(0.5, 0.0));
        self.mat = sym;
        drift
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut ev = self
            .mat
            .as_ref()
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::LinearAlgebra(format!("{e:?}")))?;
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.first().copied().unwrap_or(0.0))
    }

    pub fn purity(&self) -> f64 {
        let d = self.dim();
        let mut s = 0.0;
        for j in 0..d {
            for i in 0..d {
                s += self.mat[(i, j)].norm_sqr();
            }
        }
        s
    }

    /// `Tr(ρ O)` in `O(dim²)`.
    pub fn expectation(&self, op: &Operator) -> C64 {
        let o = op.as_mat();
        let d = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..d {
            for i in 0..d {
                acc += self.mat[(i, j)] * o[(j, i)];
            }
        }
        acc
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_pure(&self, psi: &StateVector) -> f64 {
        let v = &self.mat * psi.amplitudes();
        inner(psi.amplitudes(), v.as_ref()).re
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).collect()
    }

    pub fn tail_population(&self) -> f64 {
        tail_population(&self.populations())
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let n = self.dim() * other.dim();
        let mut mat = Mat::<C64>::zeros(n, n);
        faer::linalg::kron::kron(mat.as_mut(), self.as_mat(), other.as_mat());
        Self { mat }
    }
}

/// Reduced state of an atom ⊗ field density matrix (atom-major indices).
pub fn partial_trace(
    rho: &DensityMatrix,
    dims: (usize, usize),
    over: Subsystem,
) -> Result<DensityMatrix> {
    let (d_atom, d_field) = dims;
    if d_atom * d_field != rho.dim() || d_atom == 0 || d_field == 0 {
        return Err(Error::InvalidShape(format!(
            "partial trace over {d_atom}x{d_field} of a {}-dimensional state",
            rho.dim()
        )));
    }
    let m = rho.as_mat();
    let mat = match over {
        Subsystem::Atom => Mat::from_fn(d_field, d_field, |i, j| {
            (0..d_atom)
                .map(|s| m[(s * d_field + i, s * d_field + j)])
                .sum()
        }),
        Subsystem::Field => Mat::from_fn(d_atom, d_atom, |r, s| {
            (0..d_field)
                .map(|n| m[(r * d_field + n, s * d_field + n)])
                .sum()
        }),
    };
    Ok(DensityMatrix { mat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_psd(dim: usize, seed: &[f64]) -> DensityMatrix {
        // ρ = B B† / Tr(B B†) from a deterministic pseudo-random B
        let b = Mat::<C64>::from_fn(dim, dim, |i, j| {
            let k = (i * dim + j) % seed.len();
            C64::new(seed[k], seed[(k + 3) % seed.len()] - 0.5)
        });
        let bb = &b * b.adjoint();
        let tr: C64 = (0..dim).map(|i| bb[(i, i)]).sum();
        DensityMatrix::new(bb * Scale(C64::new(1.0 / tr.re, 0.0))).unwrap()
    }

    #[test]
    fn state_vector_is_normalised() {
        let psi = StateVector::from_amplitudes(&[C64::new(3.0, 0.0), C64::new(0.0, 4.0)]).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-15);
        assert!(StateVector::from_amplitudes(&[C64::new(0.0, 0.0)]).is_err());
        assert!(StateVector::basis(3, 3).is_err());
    }

    #[test]
    fn phase_convention_makes_first_amplitude_positive() {
        let psi = StateVector::from_amplitudes(&[
            C64::new(0.0, 0.0),
            C64::new(0.0, -0.6),
            C64::new(0.8, 0.0),
        ])
        .unwrap()
        .with_phase_convention();
        assert!(psi.amplitude(1).im.abs() < 1e-15 && psi.amplitude(1).re > 0.0);
        assert!((psi.amplitude(2) - C64::new(0.0, 0.8)).norm() < 1e-15);
    }

    #[test]
    fn bell_state_reduces_to_maximally_mixed() {
        let bell = StateVector::from_amplitudes(&[
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        ])
        .unwrap();
        let rho = bell.projector();
        for over in [Subsystem::Atom, Subsystem::Field] {
            let red = partial_trace(&rho, (2, 2), over).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let want = if i == j { 0.5 } else { 0.0 };
                    assert!((red.get(i, j) - C64::new(want, 0.0)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn product_state_factor_is_recovered() {
        let atom = random_psd(2, &[0.3, 0.9, 0.1, 0.7, 0.2]);
        let field = random_psd(4, &[0.5, 0.25, 0.8, 0.15, 0.66, 0.41, 0.09]);
        let joint = atom.tensor(&field);
        let f = partial_trace(&joint, (2, 4), Subsystem::Atom).unwrap();
        let a = partial_trace(&joint, (2, 4), Subsystem::Field).unwrap();
        assert!((&f.mat - &field.mat).as_ref().norm_max() < 1e-12);
        assert!((&a.mat - &atom.mat).as_ref().norm_max() < 1e-12);
    }

    #[test]
    fn partial_trace_shape_mismatch() {
        let rho = random_psd(6, &[0.1, 0.2, 0.3, 0.4]);
        assert!(matches!(
            partial_trace(&rho, (2, 4), Subsystem::Atom),
            Err(Error::InvalidShape(_))
        ));
    }

    #[test]
    fn validation_catches_bad_matrices() {
        let mut m = Mat::<C64>::identity(2, 2);
        assert!(DensityMatrix::new(m.clone()).is_err()); // trace 2
        m[(1, 1)] = C64::new(0.0, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(DensityMatrix::new(m.clone()).is_err()); // not Hermitian
        let neg = Mat::<C64>::from_fn(2, 2, |i, j| {
            C64::new(if i == j { [1.5, -0.5][i] } else { 0.0 }, 0.0)
        });
        assert!(matches!(DensityMatrix::new(neg), Err(Error::Positivity { .. })));
    }

    #[test]
    fn symmetrize_reports_drift() {
        let mut rho = DensityMatrix::from_mat_unchecked(Mat::from_fn(2, 2, |i, j| {
            C64::new(if i == j { 0.5 } else if i < j { 0.1 } else { 0.0 }, 0.0)
        }))
        .unwrap();
        let drift = rho.symmetrize();
        assert!((drift - 0.1).abs() < 1e-15);
        assert!(rho.hermiticity_error() == 0.0);
    }

    proptest! {
        #[test]
        fn partial_trace_preserves_trace_and_positivity(
            seed in proptest::collection::vec(0.0f64..1.0, 7..20),
            d_atom in 1usize..4,
            d_field in 2usize..6,
        ) {
            let rho = random_psd(d_atom * d_field, &seed);
            for over in [Subsystem::Atom, Subsystem::Field] {
                let red = partial_trace(&rho, (d_atom, d_field), over).unwrap();
                prop_assert!((red.trace() - rho.trace()).norm() < 1e-12);
                prop_assert!(red.min_eigenvalue().unwrap() >= -1e-8);
            }
        }
    }
}
