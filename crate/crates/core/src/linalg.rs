//! Dense matrices and univariate polynomials over a generic scalar.
//!
//! `Real` is the workhorse scalar; `f64`, `Complex64` and checked `i128`
//! share the same code paths.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::real::Real;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Size used for pivot selection.
    fn magnitude(&self) -> f64;
}

pub trait Field: Scalar + Div<Output = Self> {}

impl Scalar for Real {
    fn zero() -> Self {
        Real::zero()
    }
    fn one() -> Self {
        Real::one()
    }
    fn from_i64(v: i64) -> Self {
        Real::int(v)
    }
    fn is_zero(&self) -> bool {
        Real::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}
impl Field for Real {}

const F64_ZERO: f64 = 1e-12;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        self.abs() <= F64_ZERO
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}
impl Field for f64 {}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.norm() <= F64_ZERO
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}
impl Field for Complex64 {}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<T>], rows: usize) -> Self {
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, j| acc + self.get(i, j).clone() * v[j].clone())
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| c.clone() * x.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self.get(i / other.rows, j / other.cols).clone()
                * other.get(i % other.rows, j % other.cols).clone()
        })
    }

    /// Entrywise equality up to the scalar's own notion of zero.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| (a.clone() - b.clone()).is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }

    pub fn is_unit_upper_triangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (self.get(i, i).clone() - T::one()).is_zero()
                    && (0..i).all(|j| self.get(i, j).is_zero())
            })
    }

    /// Sub-matrix of the listed columns.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }
}

impl<T: Field> Matrix<T> {
    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter(|&i| !m.get(i, c).is_zero())
                .max_by(|&a, &b| m.get(a, c).magnitude().total_cmp(&m.get(b, c).magnitude()));
            let Some(p) = best else { continue };
            m.swap_rows(r, p);
            let inv = T::one() / m.get(r, c).clone();
            for j in 0..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m.get(i, j).clone() - f.clone() * m.get(r, j).clone();
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, as column vectors.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    /// Basis of the column space, picked from the columns themselves.
    pub fn column_basis(&self) -> Vec<Vec<T>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.col(c)).collect()
    }

    pub fn det(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let best = (c..n)
                .filter(|&i| !m.get(i, c).is_zero())
                .max_by(|&a, &b| m.get(a, c).magnitude().total_cmp(&m.get(b, c).magnitude()));
            let Some(p) = best else { return T::zero() };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = det * piv.clone();
            for i in c + 1..n {
                let f = m.get(i, c).clone() / piv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).clone() - f.clone() * m.get(c, j).clone();
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hcat(&Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Solves `self * x = b` for a square nonsingular `self`.
    pub fn solve(&self, b: &Self) -> Result<Self> {
        Ok(self.inverse()?.mul(b))
    }

    /// Characteristic polynomial `det(x - A)`, Faddeev–LeVerrier.
    pub fn char_poly(&self) -> Poly<T> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let mut mk = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&mk);
            for i in 0..n {
                let v = next.get(i, i).clone() + coeffs[n + 1 - k].clone();
                next.set(i, i, v);
            }
            mk = next;
            let tr = self.mul(&mk).trace();
            coeffs[n - k] = -(tr / T::from_i64(k as i64));
        }
        Poly::new(coeffs)
    }
}

impl Matrix<Real> {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let c = rows.first().map_or(0, |r| r.len());
        Self::from_fn(n, c, |i, j| Real::int(rows[i][j]))
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(Real::is_exact)
    }

    pub fn to_float(&self) -> Self {
        self.map(Real::to_float)
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(Real::to_f64)
    }

    pub fn to_complex(&self) -> Matrix<Complex64> {
        self.map(|x| Complex64::new(x.to_f64(), 0.0))
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_f64())
    }

    /// Integer entries as `i128`, if every entry is an exact integer.
    pub fn to_i128(&self) -> Option<Matrix<I128>> {
        let data = self
            .data
            .iter()
            .map(|x| match x {
                Real::Q(r) if r.is_integer() => {
                    num_traits::ToPrimitive::to_i128(r.numer()).map(I128::new)
                }
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix { rows: self.rows, cols: self.cols, data })
    }
}

impl Matrix<f64> {
    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| *self.get(i, j))
    }

    pub fn from_nalgebra(m: &nalgebra::DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Matrix<Complex64> {
    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| *self.get(i, j))
    }

    pub fn from_nalgebra(m: &nalgebra::DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }
}

/// Overflow-checked `i128`. Overflow poisons the value (`None`) and the
/// poison propagates, so a whole computation can be checked at the end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct I128(pub Option<i128>);

impl I128 {
    pub fn new(v: i128) -> Self {
        I128(Some(v))
    }
}

macro_rules! i128_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for I128 {
            type Output = I128;
            fn $method(self, o: I128) -> I128 {
                I128(self.0.zip(o.0).and_then(|(a, b)| a.$checked(b)))
            }
        }
    };
}
i128_binop!(Add, add, checked_add);
i128_binop!(Sub, sub, checked_sub);
i128_binop!(Mul, mul, checked_mul);

impl Neg for I128 {
    type Output = I128;
    fn neg(self) -> I128 {
        I128(self.0.and_then(i128::checked_neg))
    }
}

impl Scalar for I128 {
    fn zero() -> Self {
        I128::new(0)
    }
    fn one() -> Self {
        I128::new(1)
    }
    fn from_i64(v: i64) -> Self {
        I128::new(v as i128)
    }
    fn is_zero(&self) -> bool {
        self.0 == Some(0)
    }
    fn magnitude(&self) -> f64 {
        self.0.map_or(f64::INFINITY, |v| (v as f64).abs())
    }
}

impl Matrix<I128> {
    pub fn overflowed(&self) -> bool {
        self.data.iter().any(|x| x.0.is_none())
    }
}

/// Polynomial with coefficients from low to high degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    pub coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`
    pub fn linear(r: T) -> Self {
        Self::new(vec![-r, T::one()])
    }

    /// `x^d - 1`
    pub fn binomial(d: usize) -> Self {
        let mut c = vec![T::zero(); d + 1];
        c[0] = -T::one();
        c[d] = T::one();
        Self::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial at degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn lead(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| s.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| T::from_i64(i as i64) * c.clone())
                .collect(),
        )
    }

    /// `p(-x)`
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// `x^deg p(1/x)`
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(T::one()), |acc, _| acc.mul(self))
    }
}

impl<T: Field> Poly<T> {
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut qv = vec![T::zero(); r.len() - dd];
        let lead = d.lead();
        for i in (0..qv.len()).rev() {
            let c = r[i + dd].clone() / lead.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] = r[i + j].clone() - c.clone() * dc.clone();
            }
            r[i + dd] = T::zero();
            qv[i] = c;
        }
        r.truncate(dd);
        (Self::new(qv), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Self::new(self.coeffs.iter().map(|c| c.clone() / l.clone()).collect())
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Exact quotient, or `None` if the remainder is nonzero.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Yun's squarefree factorisation: `self = c * prod f_i^i`, returned as
    /// `(i, f_i)` with nonconstant monic `f_i`.
    pub fn squarefree(&self) -> Vec<(usize, Self)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a = f.gcd(&df);
        let mut b = f.divrem(&a).0;
        let mut c = df.divrem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let g = b.gcd(&d);
            if g.degree() > 0 {
                out.push((i, g.clone()));
            }
            b = b.divrem(&g).0;
            if b.degree() == 0 {
                break;
            }
            c = d.divrem(&g).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }
}

impl Poly<Real> {
    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Real::int(v)).collect())
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Real::is_exact)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(Real::to_f64).collect()
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> Matrix<Real> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[vec![2, 1], vec![7, 4]]);
        assert_eq!(a.det(), Real::int(1));
        let inv = a.inverse().unwrap();
        assert_eq!(inv, m(&[vec![4, -1], vec![-7, 2]]));
        assert!(m(&[vec![1, 2], vec![2, 4]]).inverse().is_err());
    }

    #[test]
    fn char_poly_of_companion() {
        // companion of x^3 - 2x + 5
        let c = m(&[vec![0, 2, -5], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(c.char_poly(), Poly::from_i64(&[5, -2, 0, 1]));
    }

    #[test]
    fn kernel_dimension() {
        let a = m(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn kron_shape() {
        let a = m(&[vec![1, 2], vec![0, 1]]);
        let k = a.kron(&a);
        assert_eq!(k.rows, 4);
        assert_eq!(*k.get(0, 3), Real::int(4));
        assert_eq!(*k.get(1, 3), Real::int(2));
    }

    #[test]
    fn squarefree_split() {
        // (x-1)^2 (x+1)^3 (x^2+1)
        let p = Poly::from_i64(&[-1, 1])
            .pow(2)
            .mul(&Poly::from_i64(&[1, 1]).pow(3))
            .mul(&Poly::from_i64(&[1, 0, 1]));
        let sf = p.squarefree();
        let degs: Vec<(usize, usize)> = sf.iter().map(|(i, f)| (*i, f.degree())).collect();
        assert_eq!(degs, vec![(1, 2), (2, 1), (3, 1)]);
    }

    #[test]
    fn i128_overflow_poisons() {
        let big = Matrix { rows: 1, cols: 1, data: vec![I128::new(i128::MAX / 2)] };
        assert!(big.pow(3).overflowed());
        let small = Matrix { rows: 1, cols: 1, data: vec![I128::new(3)] };
        assert_eq!(small.pow(3).data[0], I128::new(27));
    }
}
