// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrix exponential by scaling and squaring with diagonal
//! Padé approximants of degree 3, 5, 7, 9 and 13 (Higham 2005).

use faer::prelude::*;
use faer::Mat;

use crate::{Error, Result, C64};

const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068e0),
];
const THETA_13: f64 = 5.371_920_351_148_152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Induced 1-norm (maximum absolute column sum).
pub(crate) fn one_norm(m: MatRef<'_, C64>) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scaled(m: &Mat<C64>, s: f64) -> Mat<C64> {
    m * Scale(C64::new(s, 0.0))
}

fn add_identity(m: &mut Mat<C64>, s: f64) {
    for i in 0..m.nrows() {
        m[(i, i)] += C64::new(s, 0.0);
    }
}

/// Odd and even parts `(U, V)` of a low-degree Padé approximant.
fn pade_low(a: &Mat<C64>, b: &[f64]) -> (Mat<C64>, Mat<C64>) {
    let n = a.nrows();
    let a2 = a * a;
    let mut powers = vec![Mat::<C64>::identity(n, n), a2.clone()];
    while powers.len() < b.len() / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut odd = Mat::<C64>::zeros(n, n);
    let mut even = Mat::<C64>::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        odd += scaled(p, b[2 * k + 1]);
        even += scaled(p, b[2 * k]);
    }
    (a * &odd, even)
}

fn pade_13(a: &Mat<C64>) -> (Mat<C64>, Mat<C64>) {
    let n = a.nrows();
    let b = &B13;
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let inner_u = scaled(&a6, b[13]) + scaled(&a4, b[11]) + scaled(&a2, b[9]);
    let mut u = &a6 * &inner_u + scaled(&a6, b[7]) + scaled(&a4, b[5]) + scaled(&a2, b[3]);
    add_identity(&mut u, b[1]);
    let u = a * &u;

    let inner_v = scaled(&a6, b[12]) + scaled(&a4, b[10]) + scaled(&a2, b[8]);
    let mut v = &a6 * &inner_v + scaled(&a6, b[6]) + scaled(&a4, b[4]) + scaled(&a2, b[2]);
    add_identity(&mut v, b[0]);
    debug_assert_eq!(v.nrows(), n);
    (u, v)
}

fn solve_pade(u: &Mat<C64>, v: &Mat<C64>) -> Mat<C64> {
    let p = v + u;
    let q = v - u;
    q.partial_piv_lu().solve(&p)
}

/// `exp(m)` for a square complex matrix.
pub fn expm(m: MatRef<'_, C64>) -> Result<Mat<C64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidShape(format!(
            "matrix exponential of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows();
    for j in 0..n {
        for i in 0..n {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NumericDomain("matrix exponential input"));
            }
        }
    }
    let a = m.to_owned();
    let norm = one_norm(a.as_ref());
    if norm == 0.0 {
        return Ok(Mat::identity(n, n));
    }

    for (degree, theta) in THETA {
        if norm <= theta {
            let b: &[f64] = match degree {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            let (u, v) = pade_low(&a, b);
            return Ok(solve_pade(&u, &v));
        }
    }

    let squarings = (norm / THETA_13).log2().ceil().max(0.0) as i32;
    let a = scaled(&a, 0.5f64.powi(squarings));
    let (u, v) = pade_13(&a);
    let mut r = solve_pade(&u, &v);
    for _ in 0..squarings {
        r = &r * &r;
    }
    if r.as_ref().norm_max().is_finite() {
        Ok(r)
    } else {
        Err(Error::NumericDomain("matrix exponential result"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_diff(a: &Mat<C64>, b: &Mat<C64>) -> f64 {
        (a - b).as_ref().norm_max()
    }

    /// Truncated Taylor series, summed until terms vanish; only valid for
    /// modest norms, which is all the tests use it for.
    fn taylor(m: &Mat<C64>) -> Mat<C64> {
        let n = m.nrows();
        let mut term = Mat::<C64>::identity(n, n);
        let mut sum = term.clone();
        for k in 1..200 {
            term = &term * m * Scale(C64::new(1.0 / k as f64, 0.0));
            sum += &term;
            if term.as_ref().norm_max() < 1e-18 {
                break;
            }
        }
        sum
    }

    #[test]
    fn zero_gives_identity() {
        let z = Mat::<C64>::zeros(4, 4);
        assert_eq!(expm(z.as_ref()).unwrap(), Mat::<C64>::identity(4, 4));
    }

    #[test]
    fn diagonal_matches_scalar_exponentials() {
        let d = Mat::<C64>::from_fn(5, 5, |i, j| {
            if i == j {
                C64::new(i as f64 * 1.7 - 3.0, 0.4 * i as f64)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let e = expm(d.as_ref()).unwrap();
        for i in 0..5 {
            let want = d[(i, i)].exp();
            assert!((e[(i, i)] - want).norm() <= 1e-12 * want.norm().max(1.0));
        }
    }

    #[test]
    fn agrees_with_taylor_for_every_pade_degree() {
        for &scale in &[1e-3, 0.1, 0.5, 1.5, 4.0, 12.0] {
            let m = Mat::<C64>::from_fn(6, 6, |i, j| {
                C64::new(((i * 3 + j * 5) % 7) as f64 - 3.0, ((i + 2 * j) % 5) as f64 - 2.0)
                    * (scale / 20.0)
            });
            let e = expm(m.as_ref()).unwrap();
            let t = taylor(&m);
            let rel = max_diff(&e, &t) / t.as_ref().norm_max();
            assert!(rel < 1e-12, "scale {scale}: rel err {rel:e}");
        }
    }

    #[test]
    fn nilpotent_is_exact() {
        let mut m = Mat::<C64>::zeros(3, 3);
        m[(0, 1)] = C64::new(2.0, 0.0);
        let e = expm(m.as_ref()).unwrap();
        assert!((e[(0, 1)] - C64::new(2.0, 0.0)).norm() < 1e-14);
        assert!((e[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = Mat::<C64>::zeros(2, 2);
        m[(1, 0)] = C64::new(f64::NAN, 0.0);
        assert_eq!(
            expm(m.as_ref()),
            Err(Error::NumericDomain("matrix exponential input"))
        );
    }
}
