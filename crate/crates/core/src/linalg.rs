//! Dense matrices over an exact or floating scalar field.
//!
//! The same code paths serve exact rational representations (decisions are
//! exact) and double-precision complex ones (decisions use a tolerance).

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::rational::Q;

pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Exact inverse; `None` for (numerically) zero.
    fn inv(&self) -> Option<Self>;
    /// Magnitude used for pivot selection.
    fn magnitude(&self) -> f64;
    /// Zero test: exact for rationals, `|x| ≤ tol` for floats.
    fn negligible(&self, tol: f64) -> bool;
    fn from_q(x: &Q) -> Self;
    fn to_complex(&self) -> Complex64;
    /// Nearest field element to a numerical value; rationals round to a
    /// small denominator and reject non-real input.
    fn from_complex_approx(z: Complex64) -> Option<Self>;
    const EXACT: bool;
}

impl Field for Q {
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn magnitude(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.to_f64().map_or(f64::INFINITY, f64::abs)
    }
    fn negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.magnitude() * if self < &Q::zero() { -1.0 } else { 1.0 }, 0.0)
    }
    fn from_complex_approx(z: Complex64) -> Option<Self> {
        if z.im.abs() > 1e-9 * (1.0 + z.re.abs()) {
            return None;
        }
        crate::rational::rationalize(z.re, 10_000)
    }
    const EXACT: bool = true;
}

impl Field for Complex64 {
    fn inv(&self) -> Option<Self> {
        (self.norm() > 0.0).then(|| Complex64::one() / self)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
    fn from_q(x: &Q) -> Self {
        Complex64::new(Q::magnitude(x) * if x < &Q::zero() { -1.0 } else { 1.0 }, 0.0)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn from_complex_approx(z: Complex64) -> Option<Self> {
        Some(z)
    }
    const EXACT: bool = false;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn scalar(n: usize, c: F) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<F> = rows.into_iter().flatten().collect();
        Self::from_row_major(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.negligible(tol))
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude().powi(2)).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max)
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self, tol: f64) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| a[(i, col)].magnitude().total_cmp(&a[(j, col)].magnitude()))?;
            if a[(piv, col)].negligible(tol) {
                return None;
            }
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let p = a[(col, col)].inv()?;
            for j in 0..n {
                a[(col, j)] = a[(col, j)].clone() * p.clone();
                inv[(col, j)] = inv[(col, j)].clone() * p.clone();
            }
            for i in 0..n {
                if i == col || a[(i, col)].is_zero() {
                    continue;
                }
                let f = a[(i, col)].clone();
                for j in 0..n {
                    let t = a[(col, j)].clone();
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * t;
                    let t = inv[(col, j)].clone();
                    inv[(i, j)] = inv[(i, j)].clone() - f.clone() * t;
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank by row reduction; entries with magnitude `≤ tol` count as zero
    /// (ignored for exact fields).
    pub fn rank(&self, tol: f64) -> usize {
        let mut span = Span::new(self.cols, tol);
        for i in 0..self.rows {
            span.insert(self.row(i).to_vec());
        }
        span.dim()
    }

    /// Basis of the right null space `{v : A v = 0}`.
    pub fn null_space(&self, tol: f64) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, tol: f64) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let best = (row..a.rows)
                .max_by(|&i, &j| a[(i, col)].magnitude().total_cmp(&a[(j, col)].magnitude()))
                .unwrap();
            if a[(best, col)].negligible(tol) {
                for i in row..a.rows {
                    a[(i, col)] = F::zero();
                }
                continue;
            }
            a.swap_rows(best, row);
            let p = a[(row, col)].inv().unwrap();
            for j in 0..a.cols {
                a[(row, j)] = a[(row, j)].clone() * p.clone();
            }
            for i in 0..a.rows {
                if i == row || a[(i, col)].is_zero() {
                    continue;
                }
                let f = a[(i, col)].clone();
                for j in 0..a.cols {
                    let t = a[(row, j)].clone();
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * t;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_iterator(self.rows, self.cols, self.data.iter().map(Field::to_complex))
    }
}

impl Matrix<Complex64> {
    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out[(i, j)] = m[(i, j)];
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Self {
        self.transpose().map(|z| z.conj())
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> Mul for &Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out: Matrix<F> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                }
            }
        }
        out
    }
}

impl<F: Field> Add for &Matrix<F> {
    type Output = Matrix<F>;
    fn add(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<F: Field> Sub for &Matrix<F> {
    type Output = Matrix<F>;
    fn sub(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<F: Field> Neg for &Matrix<F> {
    type Output = Matrix<F>;
    fn neg(self) -> Matrix<F> {
        self.map(|x| -x.clone())
    }
}

/// Incrementally grown linear span, kept in reduced echelon form.
#[derive(Debug, Clone)]
pub struct Span<F> {
    dim: usize,
    tol: f64,
    /// Echelon rows with their pivot column; pivot entries are 1.
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Span<F> {
    pub fn new(ambient: usize, tol: f64) -> Self {
        Self { dim: ambient, tol, rows: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Reduction of `v` against the current basis.
    pub fn reduce(&self, mut v: Vec<F>) -> Vec<F> {
        for (p, row) in &self.rows {
            let f = v[*p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                *x = x.clone() - f.clone() * r.clone();
            }
        }
        v
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let scale = v.iter().map(Field::magnitude).fold(1.0, f64::max);
        self.reduce(v.to_vec()).iter().all(|x| x.negligible(self.tol * scale))
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length does not match span");
        let scale = v.iter().map(Field::magnitude).fold(1.0, f64::max);
        let mut r = self.reduce(v);
        let Some(p) = (0..r.len())
            .filter(|&i| !r[i].negligible(self.tol * scale))
            .max_by(|&i, &j| r[i].magnitude().total_cmp(&r[j].magnitude()))
        else {
            return false;
        };
        let inv = r[p].inv().expect("pivot is nonzero");
        for x in r.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        r[p] = F::one();
        for (_, row) in self.rows.iter_mut() {
            let f = row[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&r) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        self.rows.push((p, r));
        true
    }

    /// Basis vectors sorted by pivot column (reduced echelon form).
    pub fn basis(&self) -> Vec<Vec<F>> {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|(p, _)| *p);
        rows.into_iter().map(|(_, r)| r).collect()
    }
}

/// Singular values of a complex matrix, largest first.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank: singular values above `rel_tol · σ_max`.
pub fn numerical_rank(m: &DMatrix<Complex64>, rel_tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > rel_tol * top).count(),
        _ => 0,
    }
}
