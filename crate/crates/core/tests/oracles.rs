//! Values recomputed here from first principles, independent of the library
//! code paths they check.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectral_stokes::chain::{chain_invariants, qh_spectrum, stokes_spectrum};
use spectral_stokes::hor::{gamma, poly_to_matrix, random_cyclotomic_poly, recipe_spectrum, scal_to_matrix};
use spectral_stokes::lowdim::{char_poly3, solve2, stokes3};
use spectral_stokes::real::{q, Rational};
use spectral_stokes::seifert::exact_inertia;
use spectral_stokes::{Matrix, Real};

fn sorted(mut v: Vec<Real>) -> Vec<Real> {
    v.sort_by(|a, b| a.cmp_tol(b));
    v
}

fn to_na(m: &Matrix<Real>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows, m.cols, |i, j| m.get(i, j).to_f64())
}

/// `Σ (i_k + 1) w_k - 1` over `0 <= i_k <= d_k - 2`.
fn brieskorn_pham(d: &[i64]) -> Vec<Real> {
    let mut out = vec![Real::int(-1)];
    for &dk in d {
        let mut next = Vec::new();
        for a in &out {
            for i in 0..dk - 1 {
                next.push(a.clone() + Real::frac(i + 1, dk));
            }
        }
        out = next;
    }
    sorted(out)
}

#[test]
fn brieskorn_pham_spectra() {
    for d in [vec![2, 3], vec![3, 4], vec![3, 5], vec![3, 7], vec![2, 3, 5], vec![4, 4, 2], vec![5, 2, 3, 2]] {
        let w: Vec<Rational> = d.iter().map(|&x| q(1, x)).collect();
        assert_eq!(sorted(qh_spectrum(&w).unwrap()), brieskorn_pham(&d), "{d:?}");
    }
}

#[test]
fn a_k_stokes_spectrum() {
    for a0 in 2..=9 {
        let want: Vec<Real> = (0..a0 - 1).map(|i| Real::frac(i + 1, a0) - Real::frac(1, 2)).collect();
        assert_eq!(sorted(stokes_spectrum(&[a0]).unwrap()), want, "a0 = {a0}");
    }
}

/// Weights from `a_k w_k + w_{k+1} = 1`, `a_m w_m = 1`, solved from the end.
fn chain_weights(a: &[i64]) -> Vec<Real> {
    let m = a.len() - 1;
    let mut w = vec![Real::zero(); m + 1];
    w[m] = Real::frac(1, a[m]);
    for k in (0..m).rev() {
        w[k] = (Real::one() - w[k + 1].clone()) / Real::int(a[k]);
    }
    w
}

#[test]
fn chain_weights_and_milnor() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let m = rng.random_range(0..4usize);
        let mut a = vec![rng.random_range(2..=6i64)];
        a.extend((0..m).map(|_| rng.random_range(1..=5i64)));
        // the chain x_0^{a_0} + x_0 x_1^{a_1} + ... + x_{m-1} x_m^{a_m} is the
        // reversed system above
        let rev: Vec<i64> = a.iter().rev().cloned().collect();
        let w = chain_weights(&rev);
        let inv = chain_invariants(&a).unwrap();
        let mu = w.iter().fold(Real::one(), |acc, x| acc * (Real::one() / x.clone() - Real::one()));
        assert_eq!(mu, Real::int(inv.milnor), "{a:?}");
        assert_eq!(sorted(inv.w.clone()), sorted(w), "{a:?}");
    }
}

#[test]
fn hor_power_identity_in_floats() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(2..=10usize);
        let (p, k) = random_cyclotomic_poly(n, &mut rng);
        let h = poly_to_matrix(&p, k).unwrap();
        let s = to_na(&h.s);
        let lhs = s.clone().try_inverse().unwrap() * s.transpose() * if k == 1 { -1.0 } else { 1.0 };
        // companion with top row (-p_{n-1}, ..., -p_0)
        let c = p.to_f64();
        let r = DMatrix::from_fn(n, n, |i, j| {
            if i == 0 {
                -c[n - 1 - j] / c[n]
            } else if j + 1 == i {
                1.0
            } else {
                0.0
            }
        });
        let rn = (0..n).fold(DMatrix::identity(n, n), |acc, _| acc * &r);
        let err = (&lhs - &rn).abs().max();
        assert!(err < 1e-8 * rn.abs().max().max(1.0), "n={n} k={k} err={err}");
    }
}

#[test]
fn n2_angles_in_floats() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let num = rng.random_range(-199..=199i64);
        let a = Real::frac(num, 100);
        let s = solve2(&a).unwrap();
        let beta = (-(num as f64) / 200.0).acos() / std::f64::consts::TAU;
        assert!((s.beta1.to_f64() - beta).abs() < 1e-12, "a = {a}");
        assert!((s.alpha1.to_f64() - (2.0 * beta - 0.5)).abs() < 1e-12, "a = {a}");
    }
}

#[test]
fn identity_has_zero_spectrum() {
    for n in 1..=8 {
        for k in [1u8, 2] {
            if n == 1 && k == 2 {
                continue;
            }
            let b = gamma(n, k);
            assert!(recipe_spectrum(&b).iter().all(Real::is_zero), "n={n} k={k}");
            assert_eq!(scal_to_matrix(&b).unwrap().s, Matrix::identity(n), "n={n} k={k}");
        }
    }
}

#[test]
fn char_poly3_by_determinants() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let a: [Real; 3] = std::array::from_fn(|_| Real::frac(rng.random_range(-12..=12), 4));
        let s = to_na(&stokes3(&a));
        let m = s.clone().try_inverse().unwrap() * s.transpose();
        let p = char_poly3(&a);
        for x in [-2.0, -0.5, 0.0, 0.7, 1.5, 3.0] {
            let det = (DMatrix::identity(3, 3) * x - &m).determinant();
            let val = p.to_f64().iter().rev().fold(0.0, |acc, c| acc * x + c);
            assert!((det - val).abs() < 1e-9 * (1.0 + det.abs()), "a={a:?} x={x}: {det} vs {val}");
        }
    }
}

#[test]
fn two_by_two_signatures() {
    for num in -12..=12i64 {
        let a = Real::frac(num, 4);
        let s = Matrix::from_rows(vec![vec![Real::one(), a.clone()], vec![Real::zero(), Real::one()]]).unwrap();
        // eigenvalues of S + S^t are 2 ± a
        let ev = [2.0 + num as f64 / 4.0, 2.0 - num as f64 / 4.0];
        let pos = ev.iter().filter(|&&x| x > 0.0).count();
        let zero = ev.iter().filter(|&&x| x == 0.0).count();
        let neg = ev.iter().filter(|&&x| x < 0.0).count();
        assert_eq!(exact_inertia(&s.add(&s.transpose())), (pos, zero, neg), "a = {a}");
    }
}
