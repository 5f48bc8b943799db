use nalgebra::DMatrix;

use super::SensingModel;
use crate::algebra::{aleph, aleph_inv, Hypercomplex};
use crate::error::Result;

/// The model as a real `(DIM m) x (DIM n)` operator `G` on `aleph(x)`.
#[derive(Debug, Clone, Copy)]
pub struct RealLift<'a, M: ?Sized> {
    model: &'a M,
}

impl<'a, M: SensingModel + ?Sized> RealLift<'a, M> {
    pub fn new(model: &'a M) -> Self {
        RealLift { model }
    }

    pub fn rows(&self) -> usize {
        M::Scalar::DIM * self.model.m()
    }

    pub fn cols(&self) -> usize {
        M::Scalar::DIM * self.model.n()
    }

    /// `G v`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let x: Vec<M::Scalar> = aleph_inv(v)?;
        Ok(aleph(&self.model.forward(&x)?))
    }

    /// `G^T w`.
    pub fn adjoint_apply(&self, w: &[f64]) -> Result<Vec<f64>> {
        let u: Vec<M::Scalar> = aleph_inv(w)?;
        Ok(aleph(&self.model.adjoint(&u)?))
    }

    /// `G` assembled column by column. Intended for small models and tests.
    pub fn dense(&self) -> Result<DMatrix<f64>> {
        let cols = self.cols();
        let mut out = DMatrix::zeros(self.rows(), cols);
        let mut e = vec![0.0; cols];
        for c in 0..cols {
            e[c] = 1.0;
            let col = self.apply(&e)?;
            out.column_mut(c).copy_from_slice(&col);
            e[c] = 0.0;
        }
        Ok(out)
    }

    /// The `DIM x (DIM n)` block of row `l`, built from its terms; for a
    /// dense row this is `[gimel(a_l1) ... gimel(a_ln)]`.
    pub fn row_block(&self, l: usize) -> Result<DMatrix<f64>> {
        let d = M::Scalar::DIM;
        let row = self.model.row(l)?;
        let mut out = DMatrix::zeros(d, self.cols());
        for &(j, left, right) in &row.terms {
            let lm = DMatrix::from_row_slice(d, d, &left.left_matrix());
            let rm = DMatrix::from_row_slice(d, d, &right.right_matrix());
            let block = rm * lm;
            let mut view = out.view_mut((0, j * d), (d, d));
            view += block;
        }
        Ok(out)
    }
}
