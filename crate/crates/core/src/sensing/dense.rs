use super::{SensingModel, SensingRow};
use crate::algebra::{HyperMatrix, Hypercomplex};
use crate::error::{check_len, HprError, Result};
use crate::rng::{normal, rng_from_seed};

/// Explicit `m x n` sensing matrix, rows acting by left multiplication.
#[derive(Debug, Clone)]
pub struct DenseModel<T> {
    a: HyperMatrix<T>,
}

impl<T: Hypercomplex> DenseModel<T> {
    pub fn new(a: HyperMatrix<T>) -> Self {
        DenseModel { a }
    }

    /// I.i.d. entries with each real coefficient `N(0, 1/DIM)`, so `E|A_ij|^2 = 1`.
    pub fn gaussian(m: usize, n: usize, seed: u64) -> Result<Self> {
        check_dims(m, n)?;
        let mut rng = rng_from_seed(seed);
        let sd = (1.0 / T::DIM as f64).sqrt();
        let mut coeffs = vec![0.0; T::DIM];
        let a = HyperMatrix::from_fn(m, n, |_, _| {
            for c in coeffs.iter_mut() {
                *c = sd * normal(&mut rng);
            }
            T::from_coeffs(&coeffs)
        });
        Ok(DenseModel { a })
    }

    /// Real `N(0, 1)` entries embedded in the algebra.
    pub fn gaussian_real(m: usize, n: usize, seed: u64) -> Result<Self> {
        check_dims(m, n)?;
        let mut rng = rng_from_seed(seed);
        let a = HyperMatrix::from_fn(m, n, |_, _| T::from_real(normal(&mut rng)));
        Ok(DenseModel { a })
    }

    pub fn matrix(&self) -> &HyperMatrix<T> {
        &self.a
    }
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(HprError::InvalidParameter(format!(
            "sensing dimensions must be positive, got {m}x{n}"
        )));
    }
    Ok(())
}

impl<T: Hypercomplex> SensingModel for DenseModel<T> {
    type Scalar = T;

    fn m(&self) -> usize {
        self.a.rows()
    }

    fn n(&self) -> usize {
        self.a.cols()
    }

    fn forward(&self, x: &[T]) -> Result<Vec<T>> {
        self.a.mul_vec(x)
    }

    fn adjoint(&self, u: &[T]) -> Result<Vec<T>> {
        check_len(self.m(), u.len())?;
        let mut out = vec![T::zero(); self.n()];
        for (l, &ul) in u.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.a.row(l)) {
                *o += a.conj() * ul;
            }
        }
        Ok(out)
    }

    fn row(&self, l: usize) -> Result<SensingRow<T>> {
        if l >= self.m() {
            return Err(HprError::Index {
                index: l,
                len: self.m(),
            });
        }
        Ok(SensingRow {
            terms: self
                .a
                .row(l)
                .iter()
                .enumerate()
                .map(|(j, &a)| (j, a, T::one()))
                .collect(),
        })
    }
}
