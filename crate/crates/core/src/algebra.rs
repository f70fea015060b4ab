// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Bogoliubov-transformed ladder operators and their number basis.
//!
//! For real `0 ≤ κ < 1` the pair
//!
//! ```text
//! A  = (a  + κ a†) / √(1−κ²)
//! A† = (a† + κ a ) / √(1−κ²)
//! ```
//!
//! is canonical, `[A, A†] = 1`. Its vacuum `|0⟩_A` is the squeezed vacuum
//! `S(r)|0⟩` with `r = atanh κ`, and `|n⟩_A = (A†)ⁿ|0⟩_A / √n!` spans a
//! basis on which `A`, `A†` act exactly as `a`, `a†` act on Fock states.
//!
//! Two independent constructions of `|n⟩_A` are provided: one from the
//! ladder relations on top of the recursively computed vacuum, and a direct
//! evaluation of the closed-form double sums over double factorials.

use faer::Col;

use crate::hilbert::{annihilation, FockSpace, Operator, StateVector, TAIL_LIMIT};
use crate::{Error, Result, C64};

#[derive(Debug, Clone)]
pub struct BogoliubovPair {
    kappa: f64,
    space: FockSpace,
    a: Operator,
    a_dag: Operator,
}

impl BogoliubovPair {
    pub fn new(kappa: f64, space: FockSpace) -> Result<Self> {
        check_kappa(kappa)?;
        let a = annihilation(space);
        let ad = a.adjoint();
        let norm = 1.0 / (1.0 - kappa * kappa).sqrt();
        let big_a = (&a + &ad.scale_real(kappa)).scale_real(norm);
        let big_a_dag = big_a.adjoint();
        Ok(Self {
            kappa,
            space,
            a: big_a,
            a_dag: big_a_dag,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    /// `A`.
    pub fn annihilator(&self) -> &Operator {
        &self.a
    }

    /// `A†`.
    pub fn creator(&self) -> &Operator {
        &self.a_dag
    }

    /// `A†A`.
    pub fn number(&self) -> Operator {
        &self.a_dag * &self.a
    }

    /// Squeeze parameter `r = atanh κ` of the pair's vacuum.
    pub fn squeeze_parameter(&self) -> f64 {
        self.kappa.atanh()
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !kappa.is_finite() || !(0.0..1.0).contains(&kappa) {
        return Err(Error::UnphysicalParameter(format!(
            "kappa = {kappa} outside [0, 1); the transformation is not canonical"
        )));
    }
    Ok(())
}

pub fn build_bogoliubov(kappa: f64, space: FockSpace) -> Result<BogoliubovPair> {
    BogoliubovPair::new(kappa, space)
}

/// `r = atanh κ`.
pub fn squeeze_parameter(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(kappa.atanh())
}

/// Smallest Fock dimension (even, at least 8) at which `|n_max⟩_A` keeps
/// less than `tol` of its population above the cut.
///
/// Uses the closed form, so it is exact rather than a heuristic bound.
pub fn truncation_dim_for(kappa: f64, n_max: usize, tol: f64) -> Result<usize> {
    check_kappa(kappa)?;
    let probe = FockSpace::new(4096)?;
    let amps = closed_form_amplitudes(kappa, n_max, probe.dim());
    let mut suffix = vec![0.0f64; amps.len() + 1];
    for k in (0..amps.len()).rev() {
        suffix[k] = suffix[k + 1] + amps[k].norm_sqr();
    }
    let total = suffix[0];
    let floor = (n_max + 2).max(8);
    let dim = (floor..amps.len())
        .find(|&d| suffix[d] / total < tol)
        .unwrap_or(amps.len());
    Ok(dim + dim % 2)
}

fn truncation_guard(state: &StateVector, context: impl FnOnce() -> String) -> Result<()> {
    let tail = state.tail_population();
    if tail > TAIL_LIMIT {
        return Err(Error::Truncation {
            tail,
            limit: TAIL_LIMIT,
            context: context(),
        });
    }
    Ok(())
}

/// Kernel of `A` by the two-term recursion
/// `c_{n+1} = −κ √(n/(n+1)) c_{n−1}`, `c₀ = 1`, `c₁ = 0`, normalised.
pub fn generalized_vacuum(pair: &BogoliubovPair) -> Result<StateVector> {
    let dim = pair.space.dim();
    let kappa = pair.kappa;
    let mut c = vec![0.0f64; dim];
    c[0] = 1.0;
    for n in 1..dim - 1 {
        c[n + 1] = -kappa * (n as f64 / (n + 1) as f64).sqrt() * c[n - 1];
    }
    let psi = StateVector::new(Col::from_fn(dim, |i| C64::new(c[i], 0.0)))?;
    truncation_guard(&psi, || format!("generalized vacuum (kappa = {kappa}, dim = {dim})"))?;
    Ok(psi)
}

/// Ordered generalized number states `|0⟩_A … |n_max⟩_A`.
#[derive(Debug, Clone)]
pub struct GeneralizedBasis {
    kappa: f64,
    states: Vec<StateVector>,
}

impl GeneralizedBasis {
    /// Builds `|n⟩_A` from `|n−1⟩_A` through the lowering relation
    /// `(a + κa†)|n⟩ = √(1−κ²) √n |n−1⟩`, read row by row as a forward
    /// recursion in the Fock index:
    ///
    /// ```text
    /// ψₙ[k+1] = (√(1−κ²) √n ψₙ₋₁[k] − κ √k ψₙ[k−1]) / √(k+1)
    /// ```
    ///
    /// The only freedom is a multiple of `|0⟩_A` in the even sector, removed
    /// by orthogonalising against it. Repeated application of the truncated
    /// `A†` gives the same states in exact arithmetic but amplifies roundoff
    /// by about `κ√k/√(1−κ²)` per step, which is ruinous for `κ ≳ 0.8`.
    pub fn build(pair: &BogoliubovPair, n_max: usize) -> Result<Self> {
        let dim = pair.space.dim();
        let kappa = pair.kappa;
        let s = (1.0 - kappa * kappa).sqrt();
        let vacuum = generalized_vacuum(pair)?;
        let vac: Vec<f64> = (0..dim).map(|k| vacuum.amplitude(k).re).collect();
        let mut states = Vec::with_capacity(n_max + 1);
        let mut prev = vac.clone();
        states.push(vacuum);
        for n in 1..=n_max {
            let drive = s * (n as f64).sqrt();
            let mut psi = vec![0.0f64; dim];
            psi[1] = drive * prev[0];
            for k in 1..dim - 1 {
                let kf = k as f64;
                psi[k + 1] = (drive * prev[k] - kappa * kf.sqrt() * psi[k - 1]) / (kf + 1.0).sqrt();
            }
            if n % 2 == 0 {
                let proj: f64 = psi.iter().zip(&vac).map(|(x, v)| x * v).sum();
                for (x, v) in psi.iter_mut().zip(&vac) {
                    *x -= proj * v;
                }
            }
            let next = StateVector::new(Col::from_fn(dim, |i| C64::new(psi[i], 0.0)))?
                .with_phase_convention();
            truncation_guard(&next, || {
                format!("generalized number state {n} (kappa = {kappa}, dim = {dim})")
            })?;
            prev = (0..dim).map(|k| next.amplitude(k).re).collect();
            states.push(next);
        }
        Ok(Self { kappa, states })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn n_max(&self) -> usize {
        self.states.len() - 1
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn state(&self, n: usize) -> &StateVector {
        &self.states[n]
    }

    /// Gram matrix `⟨m|n⟩_A`.
    pub fn gram(&self) -> Vec<Vec<C64>> {
        self.states
            .iter()
            .map(|m| self.states.iter().map(|n| m.inner(n)).collect())
            .collect()
    }

    /// `max |⟨m|n⟩_A − δ_mn|`.
    pub fn orthonormality_error(&self) -> f64 {
        let gram = self.gram();
        let mut worst = 0.0f64;
        for (i, row) in gram.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                let delta = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((z - C64::new(delta, 0.0)).norm());
            }
        }
        worst
    }

    /// Largest residual of the three ladder relations over the stored
    /// states: `A†A|n⟩ = n|n⟩`, `A†|n⟩ = √(n+1)|n+1⟩`, `A|n⟩ = √n|n−1⟩`.
    pub fn ladder_residuals(&self, pair: &BogoliubovPair) -> LadderResiduals {
        let number = pair.number();
        let mut res = LadderResiduals::default();
        let diff = |lhs: Col<C64>, scale: f64, rhs: Option<&StateVector>| -> f64 {
            let mut worst = 0.0f64;
            for i in 0..lhs.nrows() {
                let r = rhs.map_or(C64::new(0.0, 0.0), |s| s.amplitude(i) * scale);
                worst = worst.max((lhs[i] - r).norm());
            }
            worst
        };
        for (n, state) in self.states.iter().enumerate() {
            let nf = n as f64;
            res.number = res
                .number
                .max(diff(number.apply(state), nf, Some(state)));
            if n + 1 < self.states.len() {
                res.raising = res.raising.max(diff(
                    pair.creator().apply(state),
                    (nf + 1.0).sqrt(),
                    Some(&self.states[n + 1]),
                ));
            }
            let lowered = pair.annihilator().apply(state);
            res.lowering = res.lowering.max(if n == 0 {
                diff(lowered, 0.0, None)
            } else {
                diff(lowered, nf.sqrt(), Some(&self.states[n - 1]))
            });
        }
        res
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LadderResiduals {
    pub number: f64,
    pub raising: f64,
    pub lowering: f64,
}

impl LadderResiduals {
    pub fn max(&self) -> f64 {
        self.number.max(self.raising).max(self.lowering)
    }
}

/// `|n⟩_A` by the ladder relations, see [`GeneralizedBasis::build`].
pub fn generalized_number_state(pair: &BogoliubovPair, n: usize) -> Result<StateVector> {
    let mut basis = GeneralizedBasis::build(pair, n)?;
    Ok(basis.states.swap_remove(n))
}

/// Natural logarithms of factorials and the double factorials that appear
/// in the closed-form basis states.
struct LogFactorials {
    ln_fact: Vec<f64>,
}

impl LogFactorials {
    fn new(max: usize) -> Self {
        let mut ln_fact = Vec::with_capacity(max + 1);
        ln_fact.push(0.0);
        for k in 1..=max {
            ln_fact.push(ln_fact[k - 1] + (k as f64).ln());
        }
        Self { ln_fact }
    }

    fn fact(&self, k: usize) -> f64 {
        self.ln_fact[k]
    }

    /// `ln (2k)!! = k ln 2 + ln k!`
    fn even_df(&self, k: usize) -> f64 {
        k as f64 * std::f64::consts::LN_2 + self.fact(k)
    }

    /// `ln (2k−1)!!`, with `(−1)!! = 1`.
    fn odd_df_below(&self, k: usize) -> f64 {
        self.fact(2 * k) - self.even_df(k)
    }

    /// `ln (2k+1)!!`.
    fn odd_df_above(&self, k: usize) -> f64 {
        self.fact(2 * k + 1) - self.even_df(k)
    }

    fn binom(&self, m: usize, l: usize) -> f64 {
        self.fact(m) - self.fact(l) - self.fact(m - l)
    }
}

/// Signed sum of `Σ sᵢ exp(xᵢ)` returned as `(sign, ln|sum|)`.
fn signed_log_sum(terms: &[(f64, f64)]) -> Option<(f64, f64)> {
    let max = terms
        .iter()
        .map(|&(_, x)| x)
        .fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return None;
    }
    let s: f64 = terms.iter().map(|&(sign, x)| sign * (x - max).exp()).sum();
    if s == 0.0 {
        return None;
    }
    Some((s.signum(), max + s.abs().ln()))
}

/// Un-normalised closed-form amplitudes of `|n⟩_A` in the Fock basis,
/// truncated at `dim`.
fn closed_form_amplitudes(kappa: f64, n: usize, dim: usize) -> Vec<C64> {
    let m = n / 2;
    let odd = n % 2 == 1;
    let lf = LogFactorials::new(2 * dim + 2 * m + 4);
    let ln_kappa = if kappa > 0.0 { kappa.ln() } else { f64::NEG_INFINITY };
    let one_minus = (1.0 - kappa * kappa).ln();
    let prefactor = if odd {
        0.75 * one_minus - 0.5 * lf.fact(n)
    } else {
        0.25 * one_minus - 0.5 * lf.fact(n)
    };

    let mut amps = vec![C64::new(0.0, 0.0); dim];
    let offset = usize::from(odd);
    let mut k = 0usize;
    while 2 * k + offset < dim {
        let outer = if odd {
            0.5 * (lf.odd_df_above(k) - lf.even_df(k))
        } else {
            0.5 * (lf.odd_df_below(k) - lf.even_df(k))
        };
        let mut terms = Vec::with_capacity(m + 1);
        for l in 0..=m {
            if k + l < m {
                continue;
            }
            // κ^{k−m+2ℓ}; the exponent is non-negative whenever k+ℓ ≥ m
            let power = (k + 2 * l) - m;
            let kappa_part = if power == 0 { 0.0 } else { power as f64 * ln_kappa };
            if kappa_part == f64::NEG_INFINITY {
                continue;
            }
            let sign = if (k + m + l) & 1 == 0 { 1.0 } else { -1.0 };
            let ratio = if odd {
                lf.odd_df_above(k + l) - lf.odd_df_above(k)
            } else {
                lf.odd_df_below(k + l) - lf.odd_df_below(k)
            };
            let ln_term =
                lf.binom(m, l) + kappa_part + lf.even_df(k) - lf.even_df(k + l - m) + ratio;
            terms.push((sign, ln_term));
        }
        if let Some((sign, ln_sum)) = signed_log_sum(&terms) {
            let value = sign * (prefactor + outer + ln_sum).exp();
            amps[2 * k + offset] = C64::new(value, 0.0);
        }
        k += 1;
    }
    amps
}

/// `|n⟩_A` from the closed-form double sums over double factorials,
/// accumulated in log space and normalised after truncation at
/// `space.dim()`.
pub fn closed_form_number_state(kappa: f64, n: usize, space: FockSpace) -> Result<StateVector> {
    check_kappa(kappa)?;
    let amps = closed_form_amplitudes(kappa, n, space.dim());
    let psi = StateVector::from_amplitudes(&amps)?.with_phase_convention();
    truncation_guard(&psi, || {
        format!(
            "closed-form number state {n} (kappa = {kappa}, dim = {})",
            space.dim()
        )
    })?;
    Ok(psi)
}

/// `|α⟩_A = exp(αA† − α*A)|0⟩_A`.
pub fn generalized_coherent(pair: &BogoliubovPair, alpha: C64) -> Result<StateVector> {
    let vacuum = generalized_vacuum(pair)?;
    if alpha == C64::new(0.0, 0.0) {
        return Ok(vacuum);
    }
    // exponentiate on a padded space so the cut does not distort the result
    let dim = pair.space.dim();
    let padded = BogoliubovPair::new(pair.kappa, FockSpace::new(2 * dim + 16)?)?;
    let generator = &padded.creator().scale(alpha) - &padded.annihilator().scale(alpha.conj());
    let full = generator.exp()?.apply(&generalized_vacuum(&padded)?);
    let psi = StateVector::new(Col::from_fn(dim, |i| full[i]))?;
    truncation_guard(&psi, || {
        format!(
            "generalized coherent state (kappa = {}, alpha = {alpha}, dim = {})",
            pair.kappa,
            pair.space.dim()
        )
    })?;
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{squeeze, StateVector};
    use approx::assert_abs_diff_eq;

    fn space(dim: usize) -> FockSpace {
        FockSpace::new(dim).unwrap()
    }

    fn residual_norm(v: Col<C64>) -> f64 {
        v.as_ref().norm_l2()
    }

    #[test]
    fn kappa_zero_gives_plain_ladder() {
        let pair = BogoliubovPair::new(0.0, space(12)).unwrap();
        assert_eq!(pair.annihilator(), &annihilation(space(12)));
    }

    #[test]
    fn rejects_non_canonical_kappa() {
        for bad in [1.0, 1.5, -0.1, f64::NAN] {
            assert!(matches!(
                BogoliubovPair::new(bad, space(8)),
                Err(Error::UnphysicalParameter(_))
            ));
            assert!(squeeze_parameter(bad).is_err());
        }
    }

    #[test]
    fn creator_is_adjoint_and_commutator_is_identity() {
        let dim = 40;
        let pair = BogoliubovPair::new(0.6, space(dim)).unwrap();
        assert_eq!(pair.creator(), &pair.annihilator().adjoint());
        let comm = pair.annihilator().commutator(pair.creator());
        let head = comm.leading_block(dim - 1);
        assert!((&head - &Operator::identity(dim - 1)).norm_max() < 1e-10);
    }

    #[test]
    fn squeezed_vacuum_is_annihilated() {
        let s = space(60);
        let pair = BogoliubovPair::new(0.6, s).unwrap();
        let sq = squeeze(s, C64::new(0.6f64.atanh(), 0.0)).unwrap();
        let psi = StateVector::new(sq.apply(&StateVector::fock(s, 0).unwrap())).unwrap();
        assert!(residual_norm(pair.annihilator().apply(&psi)) <= 1e-6);
    }

    #[test]
    fn vacuum_recursion() {
        let vac0 = generalized_vacuum(&BogoliubovPair::new(0.0, space(10)).unwrap()).unwrap();
        assert_eq!(vac0, StateVector::fock(space(10), 0).unwrap());

        let vac = generalized_vacuum(&BogoliubovPair::new(0.6, space(60)).unwrap()).unwrap();
        let ratio = vac.amplitude(2).re / vac.amplitude(0).re;
        assert_abs_diff_eq!(ratio, -0.6 / 2f64.sqrt(), epsilon = 1e-14);
        assert!(vac.amplitude(0).re > 0.0);
        for k in (1..60).step_by(2) {
            assert_eq!(vac.amplitude(k), C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn vacuum_matches_squeezed_vacuum() {
        let s = space(60);
        let vac = generalized_vacuum(&BogoliubovPair::new(0.6, s).unwrap()).unwrap();
        let sq = squeeze(s, C64::new(squeeze_parameter(0.6).unwrap(), 0.0)).unwrap();
        let target = StateVector::new(sq.apply(&StateVector::fock(s, 0).unwrap())).unwrap();
        assert!(vac.inner(&target).norm() >= 1.0 - 1e-6);
    }

    #[test]
    fn vacuum_truncation_is_reported() {
        let pair = BogoliubovPair::new(0.95, space(12)).unwrap();
        assert!(matches!(
            generalized_vacuum(&pair),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn number_state_eigenvalues() {
        let dim = truncation_dim_for(0.6, 10, 1e-24).unwrap();
        let pair = BogoliubovPair::new(0.6, space(dim)).unwrap();
        let basis = GeneralizedBasis::build(&pair, 8).unwrap();
        assert!(basis.state(0).overlap(&generalized_vacuum(&pair).unwrap()) > 1.0 - 1e-14);
        let res = basis.ladder_residuals(&pair);
        assert!(res.number < 1e-7, "dim {dim}: {res:?}");
        assert!(basis.orthonormality_error() < 1e-7);
    }

    #[test]
    fn closed_form_reduces_to_fock_at_kappa_zero() {
        for n in 0..7 {
            let psi = closed_form_number_state(0.0, n, space(10)).unwrap();
            assert_eq!(psi, StateVector::fock(space(10), n).unwrap());
        }
    }

    #[test]
    fn closed_form_even_zero_is_the_vacuum() {
        let s = space(60);
        let pair = BogoliubovPair::new(0.6, s).unwrap();
        let cf = closed_form_number_state(0.6, 0, s).unwrap();
        let vac = generalized_vacuum(&pair).unwrap();
        assert!((cf.inner(&vac) - C64::new(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn closed_form_first_odd_is_orthogonal_to_vacuum() {
        let s = space(60);
        let one = closed_form_number_state(0.6, 1, s).unwrap();
        let vac = closed_form_number_state(0.6, 0, s).unwrap();
        assert!(one.inner(&vac).norm() < 1e-8);
    }

    #[test]
    fn closed_form_agrees_with_ladder() {
        let s = space(80);
        let pair = BogoliubovPair::new(0.6, s).unwrap();
        let basis = GeneralizedBasis::build(&pair, 8).unwrap();
        for n in 0..=8 {
            let cf = closed_form_number_state(0.6, n, s).unwrap();
            let overlap = cf.inner(basis.state(n));
            assert!(overlap.re >= 1.0 - 1e-6, "n = {n}: {overlap}");
        }
    }

    #[test]
    fn coherent_state_eigenvalue() {
        let s = space(60);
        let pair = BogoliubovPair::new(0.6, s).unwrap();
        assert_eq!(
            generalized_coherent(&pair, C64::new(0.0, 0.0)).unwrap(),
            generalized_vacuum(&pair).unwrap()
        );
        for (alpha, dim) in [(C64::new(0.18, 0.0), 60), (C64::new(-0.3, 0.4), 80)] {
            let pair = BogoliubovPair::new(0.6, space(dim)).unwrap();
            let psi = generalized_coherent(&pair, alpha).unwrap();
            let mut r = pair.annihilator().apply(&psi);
            for i in 0..r.nrows() {
                r[i] -= alpha * psi.amplitude(i);
            }
            let norm = r.as_ref().norm_l2();
            assert!(norm <= 1e-6, "alpha {alpha}: {norm:e}");
        }
    }

    #[test]
    fn coherent_state_has_small_odd_populations() {
        let pair = BogoliubovPair::new(0.6, space(60)).unwrap();
        let psi = generalized_coherent(&pair, C64::new(0.18, 0.0)).unwrap();
        let p = psi.populations();
        let odd: f64 = p.iter().skip(1).step_by(2).sum();
        let even: f64 = p.iter().step_by(2).sum();
        assert!(odd > 1e-3 && odd < 0.2 * even, "odd {odd}, even {even}");
    }

    #[test]
    fn squeeze_parameter_values() {
        assert_eq!(squeeze_parameter(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(squeeze_parameter(0.6).unwrap(), std::f64::consts::LN_2, epsilon = 1e-12);
        for k in [0.0, 0.1, 0.6, 0.9, 0.999] {
            assert_abs_diff_eq!(squeeze_parameter(k).unwrap().tanh(), k, epsilon = 1e-12);
        }
    }

    #[test]
    fn truncation_dim_grows_with_kappa() {
        let d3 = truncation_dim_for(0.3, 8, 1e-16).unwrap();
        let d9 = truncation_dim_for(0.9, 8, 1e-16).unwrap();
        assert!(d3 < d9);
        assert!(d9 < 4096);
    }
}
