use std::ops::{Deref, DerefMut, Index, IndexMut};

use super::Hypercomplex;
use crate::error::{check_len, HprError, Result};

/// Dense vector over a hypercomplex algebra.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HyperVector<T>(pub Vec<T>);

impl<T: Hypercomplex> HyperVector<T> {
    pub fn zeros(n: usize) -> Self {
        HyperVector(vec![T::zero(); n])
    }

    /// Euclidean norm `sqrt(sum |x_i|^2)`.
    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    /// `x * w` with `w` multiplied from the right onto every entry.
    pub fn right_mul(&self, w: T) -> Self {
        HyperVector(self.0.iter().map(|&x| x * w).collect())
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

impl<T> From<Vec<T>> for HyperVector<T> {
    fn from(v: Vec<T>) -> Self {
        HyperVector(v)
    }
}

impl<T> Deref for HyperVector<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> DerefMut for HyperVector<T> {
    fn deref_mut(&mut self) -> &mut [T] {
        &mut self.0
    }
}

/// Euclidean norm of a hypercomplex slice.
pub fn norm<T: Hypercomplex>(x: &[T]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// `sum_i conj(x_i) y_i`, the hypercomplex inner product `x^* y`.
pub fn inner<T: Hypercomplex>(x: &[T], y: &[T]) -> T {
    x.iter()
        .zip(y)
        .fold(T::zero(), |acc, (&a, &b)| acc + a.conj() * b)
}

/// Dense row-major matrix over a hypercomplex algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Hypercomplex> HyperMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        HyperMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        check_len(rows * cols, data.len())?;
        Ok(HyperMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        HyperMatrix { rows, cols, data }
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

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `(A x)_i = sum_j A_ij x_j`, matrix entries multiplied from the left.
    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.cols, x.len())?;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (&a, &v)| acc + a * v)
            })
            .collect())
    }

    /// `A B` for conforming matrices.
    pub fn mul_mat(&self, other: &HyperMatrix<T>) -> Result<HyperMatrix<T>> {
        if self.cols != other.rows {
            return Err(HprError::Shape {
                expected: self.cols,
                actual: other.rows,
            });
        }
        Ok(HyperMatrix::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self[(r, k)] * other[(k, c)])
        }))
    }

    /// Hermitian adjoint, `(A^*)_ij = conj(A_ji)`.
    pub fn adjoint(&self) -> HyperMatrix<T> {
        HyperMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }
}

impl<T> Index<(usize, usize)> for HyperMatrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for HyperMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

/// Hermitian adjoint of `a`.
pub fn hermitian_adjoint<T: Hypercomplex>(a: &HyperMatrix<T>) -> HyperMatrix<T> {
    a.adjoint()
}
