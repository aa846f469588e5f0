use num_complex::Complex64;

use super::element::RingElement;
use super::laurent::LaurentPoly;
use crate::error::{Error, Result};

/// Minimal ring interface needed by [`Matrix`] products.
pub trait Ring: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        *self == Complex64::new(0.0, 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Ring for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Ring for RingElement {
    fn zero() -> Self {
        RingElement::zero()
    }
    fn one() -> Self {
        RingElement::one()
    }
    fn is_zero(&self) -> bool {
        RingElement::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Dense row-major matrix. Acts on row vectors from the right: `v -> v * A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type LaurentMatrix = Matrix<LaurentPoly>;
pub type RingMatrix = Matrix<RingElement>;

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Rows must all have length `cols`; `cols` is explicit so `k x 0` shapes are expressible.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            data.extend(row);
        }
        Ok(Matrix { rows: nrows, cols, data })
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Drop column `j`.
    pub fn without_col(&self, j: usize) -> Self {
        Matrix::from_fn(self.rows, self.cols - 1, |r, c| self.get(r, if c < j { c } else { c + 1 }).clone())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn mul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(rhs.get(k, j)));
            }
            acc
        }))
    }

    pub fn neg(&self) -> Self {
        self.map(Ring::neg)
    }

    /// Left-multiply row `i` by `g`.
    pub fn scale_row(&mut self, i: usize, g: &T) {
        for j in 0..self.cols {
            let v = g.mul(self.get(i, j));
            self.set(i, j, v);
        }
    }

    /// Right-multiply column `j` by `g`.
    pub fn scale_col(&mut self, j: usize, g: &T) {
        for i in 0..self.rows {
            let v = self.get(i, j).mul(g);
            self.set(i, j, v);
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix<T>) -> Self {
        Matrix::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            match (i < self.rows, j < self.cols) {
                (true, true) => self.get(i, j).clone(),
                (false, false) => other.get(i - self.rows, j - self.cols).clone(),
                _ => T::zero(),
            }
        })
    }
}

impl Matrix<LaurentPoly> {
    /// Entry-wise involution followed by transpose.
    pub fn involute_transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).involute())
    }

    pub fn eval(&self, z: Complex64) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(z))
    }

    /// True when every entry is a constant (degree-zero) polynomial.
    pub fn is_constant(&self) -> bool {
        self.data.iter().all(LaurentPoly::is_constant)
    }

    pub fn max_entry_distance(&self, other: &Self) -> f64 {
        self.data.iter().zip(other.data.iter()).map(|(a, b)| a.distance(b)).fold(0.0, f64::max)
    }

    pub fn max_entry_norm(&self) -> f64 {
        self.data.iter().map(LaurentPoly::l1_norm).fold(0.0, f64::max)
    }

    pub fn from_constants(m: &nalgebra::DMatrix<Complex64>) -> Self {
        Matrix::from_fn(m.nrows(), m.ncols(), |i, j| LaurentPoly::constant(m[(i, j)]))
    }
}
