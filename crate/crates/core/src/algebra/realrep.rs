//! Real representations: `aleph` flattens hypercomplex vectors into real
//! vectors, `gimel` lifts hypercomplex matrices to real block matrices with
//! `aleph(A x) = gimel(A) aleph(x)`.

use nalgebra::DMatrix;

use super::{HyperMatrix, Hypercomplex};
use crate::error::{HprError, Result};

/// Concatenated coefficients, length `DIM * x.len()`.
pub fn aleph<T: Hypercomplex>(x: &[T]) -> Vec<f64> {
    let mut out = vec![0.0; T::DIM * x.len()];
    for (chunk, v) in out.chunks_exact_mut(T::DIM).zip(x) {
        v.write_coeffs(chunk);
    }
    out
}

/// Inverse of [`aleph`].
pub fn aleph_inv<T: Hypercomplex>(v: &[f64]) -> Result<Vec<T>> {
    if !v.len().is_multiple_of(T::DIM) {
        return Err(HprError::Shape {
            expected: T::DIM * v.len().div_ceil(T::DIM),
            actual: v.len(),
        });
    }
    Ok(v.chunks_exact(T::DIM).map(T::from_coeffs).collect())
}

/// `gimel` of a single scalar as a `DIM x DIM` matrix.
pub fn gimel_scalar<T: Hypercomplex>(x: &T) -> DMatrix<f64> {
    DMatrix::from_row_slice(T::DIM, T::DIM, &x.left_matrix())
}

/// Block-assembled `gimel(A)`, shape `(DIM * rows) x (DIM * cols)`.
pub fn gimel<T: Hypercomplex>(a: &HyperMatrix<T>) -> DMatrix<f64> {
    let d = T::DIM;
    let (rows, cols) = a.shape();
    let mut out = DMatrix::zeros(rows * d, cols * d);
    for r in 0..rows {
        for c in 0..cols {
            let block = a[(r, c)].left_matrix();
            for i in 0..d {
                for j in 0..d {
                    out[(r * d + i, c * d + j)] = block[i * d + j];
                }
            }
        }
    }
    out
}

/// `gimel` of a column vector `x` (an `n x 1` matrix): `aleph(x z) = gimel_column(x) aleph(z)`.
pub fn gimel_column<T: Hypercomplex>(x: &[T]) -> DMatrix<f64> {
    let col = HyperMatrix::from_fn(x.len(), 1, |r, _| x[r]);
    gimel(&col)
}
