//! Floating point helpers: polynomial roots, SVD subspaces, inertia.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::linalg::Matrix;

/// Roots closer than this are treated as one multiple root.
pub const CLUSTER_RADIUS: f64 = 1e-4;

/// `-arg(z) / 2π` in `[0, 1)`, i.e. the `θ` with `z = |z| e^{-2πiθ}`.
pub fn angle_turns(z: Complex64) -> f64 {
    let t = -z.arg() / std::f64::consts::TAU;
    let t = t.rem_euclid(1.0);
    if t >= 1.0 - 1e-15 {
        0.0
    } else {
        t
    }
}

/// `e^{-2πiθ}`
pub fn from_turns(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, -std::f64::consts::TAU * theta)
}

/// Signed distance between two angles (in turns), folded into `(-1/2, 1/2]`.
pub fn turn_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    if d > 0.5 {
        d - 1.0
    } else {
        d
    }
}

fn eval(c: &[f64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// All complex roots of a real polynomial (coefficients low to high), with
/// multiplicity. Near-coincident roots are replaced by their mean.
pub fn roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last().is_some_and(|&x| x == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return vec![];
    }
    let n = c.len() - 1;
    let lead = c[n];
    let mut zeros_at_origin = 0;
    while c.first() == Some(&0.0) {
        c.remove(0);
        zeros_at_origin += 1;
    }
    let m = c.len() - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    if m > 0 {
        let comp = DMatrix::from_fn(m, m, |i, j| {
            if i == 0 {
                -c[m - 1 - j] / lead
            } else if j + 1 == i {
                1.0
            } else {
                0.0
            }
        });
        let raw: Vec<Complex64> = comp.complex_eigenvalues().iter().copied().collect();
        // a root of multiplicity k is refined as a simple root of p^(k-1)
        let grouped = cluster(&raw, CLUSTER_RADIUS);
        let mut derivs = vec![c.clone()];
        let mut done = vec![false; grouped.len()];
        for i in 0..grouped.len() {
            if done[i] {
                continue;
            }
            let members: Vec<usize> = (i..grouped.len()).filter(|&j| grouped[j] == grouped[i]).collect();
            let k = members.len();
            while derivs.len() <= k {
                let last = derivs.last().unwrap();
                derivs.push((1..last.len()).map(|t| t as f64 * last[t]).collect());
            }
            let (f, df) = (&derivs[k - 1], &derivs[k]);
            let mut z = grouped[i];
            for _ in 0..60 {
                let d = eval(df, z);
                if d.norm() == 0.0 {
                    break;
                }
                let cand = z - eval(f, z) / d;
                if eval(f, cand).norm() < eval(f, z).norm() {
                    z = cand;
                } else {
                    break;
                }
            }
            for j in members {
                done[j] = true;
                out.push(z);
            }
        }
    }
    out
}

/// Replaces every group of points that are chained within `radius` by
/// copies of the group mean.
pub fn cluster(pts: &[Complex64], radius: f64) -> Vec<Complex64> {
    let n = pts.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut j = i;
        while p[j] != r {
            let nx = p[j];
            p[j] = r;
            j = nx;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (pts[i] - pts[j]).norm() < radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut sums = vec![(Complex64::new(0.0, 0.0), 0usize); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        sums[r].0 += pts[i];
        sums[r].1 += 1;
    }
    (0..n)
        .map(|i| {
            let r = find(&mut parent, i);
            sums[r].0 / sums[r].1 as f64
        })
        .collect()
}

/// Greedy nearest matching: `perm[i]` is the index in `cur` assigned to
/// `prev[i]`.
pub fn match_nearest(prev: &[Complex64], cur: &[Complex64]) -> Vec<usize> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(prev.len() * cur.len());
    for (i, a) in prev.iter().enumerate() {
        for (j, b) in cur.iter().enumerate() {
            pairs.push(((a - b).norm(), i, j));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut perm = vec![usize::MAX; prev.len()];
    let mut used = vec![false; cur.len()];
    for (_, i, j) in pairs {
        if perm[i] == usize::MAX && !used[j] {
            perm[i] = j;
            used[j] = true;
        }
    }
    perm
}

fn pad_square(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows().max(m.ncols());
    DMatrix::from_fn(n, m.ncols(), |i, j| if i < m.nrows() { m[(i, j)] } else { Complex64::new(0.0, 0.0) })
}

/// Orthonormal basis (columns) of the right null space, taking the `dim`
/// smallest singular directions.
pub fn null_space(m: &Matrix<Complex64>, dim: usize) -> Matrix<Complex64> {
    let a = pad_square(&m.to_nalgebra());
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&x, &y| svd.singular_values[x].total_cmp(&svd.singular_values[y]));
    let cols: Vec<Vec<Complex64>> =
        idx.iter().take(dim).map(|&k| (0..vt.ncols()).map(|j| vt[(k, j)].conj()).collect()).collect();
    Matrix::from_cols(&cols, m.cols)
}

/// Orthonormal basis (columns) of the span of the `dim` dominant left
/// singular directions.
pub fn range_space(m: &Matrix<Complex64>, dim: usize) -> Matrix<Complex64> {
    let svd = m.to_nalgebra().svd(true, false);
    let u = svd.u.expect("u requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let cols: Vec<Vec<Complex64>> =
        idx.iter().take(dim).map(|&k| (0..u.nrows()).map(|i| u[(i, k)]).collect()).collect();
    Matrix::from_cols(&cols, m.rows)
}

/// Singular values, largest first.
pub fn singular_values(m: &Matrix<Complex64>) -> Vec<f64> {
    if m.rows == 0 || m.cols == 0 {
        return vec![];
    }
    let mut s: Vec<f64> = m.to_nalgebra().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Rank with a threshold relative to the largest singular value.
pub fn rank(m: &Matrix<Complex64>, rel: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0).max(1.0);
    s.iter().filter(|&&x| x > rel * top).count()
}

/// `(positive, zero, negative)` eigenvalue counts of a Hermitian matrix;
/// the input is symmetrised first.
pub fn hermitian_inertia(h: &Matrix<Complex64>, tol: f64) -> (usize, usize, usize) {
    if h.rows == 0 {
        return (0, 0, 0);
    }
    let a = h.to_nalgebra();
    let sym = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let ev = sym.symmetric_eigenvalues();
    let scale = ev.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let mut out = (0, 0, 0);
    for &x in ev.iter() {
        if x > tol * scale {
            out.0 += 1;
        } else if x < -tol * scale {
            out.2 += 1;
        } else {
            out.1 += 1;
        }
    }
    out
}

pub fn real_inertia(h: &Matrix<f64>, tol: f64) -> (usize, usize, usize) {
    hermitian_inertia(&h.map(|&x| Complex64::new(x, 0.0)), tol)
}

pub fn cmat_mul(a: &Matrix<Complex64>, b: &Matrix<Complex64>) -> Matrix<Complex64> {
    Matrix::<Complex64>::from_nalgebra(&(a.to_nalgebra() * b.to_nalgebra()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_root_is_clustered() {
        // (x+1)^2 (x^2+1)
        let r = roots(&[1.0, 2.0, 2.0, 2.0, 1.0]);
        let near_minus_one = r.iter().filter(|z| (*z - Complex64::new(-1.0, 0.0)).norm() < 1e-12).count();
        assert_eq!(near_minus_one, 2);
        assert!(r.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn triple_root_mean_is_accurate() {
        // (x-1)^3
        let r = roots(&[-1.0, 3.0, -3.0, 1.0]);
        assert_eq!(r.len(), 3);
        for z in r {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-10, "{z}");
        }
    }

    #[test]
    fn angles() {
        assert!((angle_turns(Complex64::new(0.0, -1.0)) - 0.25).abs() < 1e-15);
        assert_eq!(angle_turns(Complex64::new(1.0, 0.0)), 0.0);
        assert!((turn_diff(0.95, 0.05) + 0.1).abs() < 1e-12);
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = Matrix::from_fn(2, 2, |_, _| Complex64::new(1.0, 0.0));
        let k = null_space(&m, 1);
        let v = m.mul_vec(&k.col(0));
        assert!(v.iter().all(|z| z.norm() < 1e-12));
    }
}
