// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;
use sqlaser::algebra::{
    closed_form_number_state, generalized_coherent, generalized_vacuum, squeeze_parameter,
    truncation_dim_for, BogoliubovPair, GeneralizedBasis,
};
use sqlaser::hilbert::{squeeze, FockSpace, StateVector};
use sqlaser::C64;

const KAPPAS: [f64; 4] = [0.0, 0.3, 0.6, 0.9];
const N_MAX: usize = 8;

fn basis_for(kappa: f64) -> (BogoliubovPair, GeneralizedBasis) {
    let dim = truncation_dim_for(kappa, N_MAX + 2, 1e-24).unwrap();
    let pair = BogoliubovPair::new(kappa, FockSpace::new(dim).unwrap()).unwrap();
    let basis = GeneralizedBasis::build(&pair, N_MAX).unwrap();
    (pair, basis)
}

#[test]
fn ladder_relations_hold_for_all_kappas() {
    for kappa in KAPPAS {
        let (pair, basis) = basis_for(kappa);
        let res = basis.ladder_residuals(&pair);
        assert!(res.max() <= 1e-7, "kappa {kappa}: {res:?}");
    }
}

#[test]
fn gram_matrix_is_identity() {
    for kappa in KAPPAS {
        let (_, basis) = basis_for(kappa);
        let err = basis.orthonormality_error();
        assert!(err <= 1e-7, "kappa {kappa}: {err:e}");
    }
}

#[test]
fn closed_form_matches_ladder() {
    for kappa in KAPPAS {
        let (pair, basis) = basis_for(kappa);
        for n in 0..=N_MAX {
            let cf = closed_form_number_state(kappa, n, pair.space()).unwrap();
            let overlap = cf.overlap(basis.state(n));
            assert!(overlap >= 1.0 - 1e-6, "kappa {kappa}, n {n}: {overlap}");
        }
    }
}

#[test]
fn parity_sectors_are_disjoint() {
    for kappa in KAPPAS {
        let (pair, _) = basis_for(kappa);
        for n in 0..=N_MAX {
            let psi = closed_form_number_state(kappa, n, pair.space()).unwrap();
            let wrong: f64 = (0..psi.dim())
                .filter(|k| k % 2 != n % 2)
                .map(|k| psi.amplitude(k).norm())
                .fold(0.0, f64::max);
            assert!(wrong <= 1e-10, "kappa {kappa}, n {n}: {wrong:e}");
        }
    }
}

#[test]
fn vacuum_is_squeezed_vacuum() {
    for kappa in KAPPAS {
        let dim = truncation_dim_for(kappa, 0, 1e-20).unwrap();
        let space = FockSpace::new(dim).unwrap();
        let pair = BogoliubovPair::new(kappa, space).unwrap();
        let vac = generalized_vacuum(&pair).unwrap();
        let r = squeeze_parameter(kappa).unwrap();
        let sq = squeeze(space, C64::new(r, 0.0)).unwrap();
        let target = StateVector::new(sq.apply(&StateVector::fock(space, 0).unwrap())).unwrap();
        let overlap = vac.overlap(&target);
        assert!(overlap >= 1.0 - 1e-6, "kappa {kappa}: {overlap}");
    }
}

/// The recursion must agree with the numerically computed kernel of the
/// truncated `A`, taken as the right singular vector of its smallest
/// singular value.
#[test]
fn vacuum_matches_null_space_oracle() {
    for kappa in [0.3, 0.6] {
        let space = FockSpace::new(60).unwrap();
        let pair = BogoliubovPair::new(kappa, space).unwrap();
        let svd = pair.annihilator().as_mat().svd().unwrap();
        let s = svd.S();
        let mut best = 0;
        for i in 0..60 {
            if s[i].re < s[best].re {
                best = i;
            }
        }
        let null = StateVector::new(svd.V().col(best).to_owned()).unwrap();
        let vac = generalized_vacuum(&pair).unwrap();
        let overlap = vac.overlap(&null);
        assert!(overlap >= 1.0 - 1e-6, "kappa {kappa}: {overlap}");
    }
}

#[test]
fn coherent_state_is_eigenstate() {
    let space = FockSpace::new(80).unwrap();
    let pair = BogoliubovPair::new(0.6, space).unwrap();
    let alpha = C64::new(0.5, -0.2);
    let psi = generalized_coherent(&pair, alpha).unwrap();
    let mut r = pair.annihilator().apply(&psi);
    for i in 0..r.nrows() {
        r[i] -= alpha * psi.amplitude(i);
    }
    assert!(r.as_ref().norm_l2() <= 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_constructions_agree(kappa in 0.0f64..0.8, n in 0usize..7) {
        let dim = truncation_dim_for(kappa, n + 2, 1e-24).unwrap();
        let pair = BogoliubovPair::new(kappa, FockSpace::new(dim).unwrap()).unwrap();
        let basis = GeneralizedBasis::build(&pair, n).unwrap();
        let cf = closed_form_number_state(kappa, n, pair.space()).unwrap();
        prop_assert!(cf.overlap(basis.state(n)) >= 1.0 - 1e-6);
        prop_assert!(cf.amplitude(n % 2).re > 0.0);
    }

    #[test]
    fn squeeze_parameter_round_trips(kappa in 0.0f64..0.999) {
        prop_assert!((squeeze_parameter(kappa).unwrap().tanh() - kappa).abs() <= 1e-12);
    }
}
