//! Intensity measurement models `y = |A x|^2`.
//!
//! Every model is a real-linear map `x -> A x` over some hypercomplex algebra,
//! exposed three ways: the full forward map, one row at a time, and a real
//! lift acting on `aleph(x)`. The three must agree.

mod coded;
mod dense;
mod lift;
mod model;
mod noise;
mod stft;
mod wavelet;

pub use coded::{CodedFourier, DoeAlphabet};
pub use dense::DenseModel;
pub use lift::RealLift;
pub use model::{ModelKind, QuaternionModel};
pub use noise::{add_noise, noise_for};
pub use stft::StftModel;
pub use wavelet::WaveletModel;

use crate::algebra::Hypercomplex;
use crate::error::{check_len, Result};

/// One measurement functional `x -> sum_t (left_t x[index_t]) right_t`.
///
/// Dense rows have `right_t = 1`; two-sided transforms need both factors.
/// The bracketing is fixed left first, which matters for octonions.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingRow<T> {
    pub terms: Vec<(usize, T, T)>,
}

impl<T: Hypercomplex> SensingRow<T> {
    pub fn apply(&self, x: &[T]) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, &(j, l, r)| acc + (l * x[j]) * r)
    }

    /// Real adjoint of the row applied to a scalar `u`. Each term
    /// `x -> (l x) r` has adjoint `u -> conj(l) (u conj(r))`.
    pub fn adjoint(&self, u: T, n: usize) -> Vec<T> {
        let mut out = vec![T::zero(); n];
        for &(j, l, r) in &self.terms {
            out[j] += l.conj() * (u * r.conj());
        }
        out
    }

    /// `|G|_F^2 / DIM` for the real lift `G` of the row, i.e. `E|row(x)|^2`
    /// for `x` with i.i.d. isotropic entries of unit second moment.
    pub fn lifted_energy(&self) -> f64 {
        let d = T::DIM;
        let mut order: Vec<usize> = (0..self.terms.len()).collect();
        order.sort_by_key(|&k| self.terms[k].0);
        let mut total = 0.0;
        for group in order.chunk_by(|&p, &q| self.terms[p].0 == self.terms[q].0) {
            if let [k] = group {
                let (_, a, b) = self.terms[*k];
                total += a.norm_sqr() * b.norm_sqr();
                continue;
            }
            let mut block = vec![0.0; d * d];
            for &k in group {
                let (_, a, b) = self.terms[k];
                let (la, rb) = (a.left_matrix(), b.right_matrix());
                for r in 0..d {
                    for c in 0..d {
                        block[r * d + c] +=
                            (0..d).map(|q| rb[r * d + q] * la[q * d + c]).sum::<f64>();
                    }
                }
            }
            total += block.iter().map(|v| v * v).sum::<f64>() / d as f64;
        }
        total
    }

    /// Upper bound on the squared spectral norm of the row's real lift.
    pub fn norm_sqr_bound(&self) -> f64 {
        let mut per_index: Vec<(usize, f64)> = Vec::new();
        for &(j, l, r) in &self.terms {
            let w = l.modulus() * r.modulus();
            match per_index.iter_mut().find(|e| e.0 == j) {
                Some(e) => e.1 += w,
                None => per_index.push((j, w)),
            }
        }
        per_index.iter().map(|e| e.1 * e.1).sum()
    }
}

/// A real-linear sensing operator over the algebra `Scalar`.
pub trait SensingModel: Send + Sync {
    type Scalar: Hypercomplex;

    /// Number of measurements.
    fn m(&self) -> usize;
    /// Signal length.
    fn n(&self) -> usize;

    /// `A x`, before taking moduli.
    fn forward(&self, x: &[Self::Scalar]) -> Result<Vec<Self::Scalar>>;

    /// Real adjoint: `aleph(adjoint(u)) = G^T aleph(u)` where `G` is the real lift of `A`.
    fn adjoint(&self, u: &[Self::Scalar]) -> Result<Vec<Self::Scalar>>;

    /// Row `l` as an explicit functional.
    fn row(&self, l: usize) -> Result<SensingRow<Self::Scalar>>;

    /// `|A|_F^2 / (m n)`, so that `E[y] = entry_energy * |x|^2` for isotropic
    /// signals. Equals one in expectation for the Gaussian models.
    fn entry_energy(&self) -> Result<f64> {
        let mut total = 0.0;
        for l in 0..self.m() {
            total += self.row(l)?.lifted_energy();
        }
        Ok(total / (self.m() * self.n()) as f64)
    }
}

/// `y = |A x|^2`.
pub fn measure<M: SensingModel + ?Sized>(model: &M, x: &[M::Scalar]) -> Result<Vec<f64>> {
    check_len(model.n(), x.len())?;
    Ok(model.forward(x)?.iter().map(|u| u.norm_sqr()).collect())
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use crate::rng::{normal, HprRng};

    pub fn random_vec<T: Hypercomplex>(rng: &mut HprRng, n: usize) -> Vec<T> {
        (0..n)
            .map(|_| {
                let c: Vec<f64> = (0..T::DIM).map(|_| normal(rng)).collect();
                T::from_coeffs(&c)
            })
            .collect()
    }

    /// Forward, row-wise and lifted evaluation agree, and the adjoint is the transpose.
    pub fn check_consistency<M: SensingModel>(model: &M, rng: &mut HprRng) {
        let x: Vec<M::Scalar> = random_vec(rng, model.n());
        let u = model.forward(&x).unwrap();
        assert_eq!(u.len(), model.m());
        let y = measure(model, &x).unwrap();
        let scale = crate::algebra::norm(&u).max(1.0);
        for l in 0..model.m() {
            let row = model.row(l).unwrap().apply(&x);
            assert!((row - u[l]).modulus() <= 1e-12 * scale, "row {l}");
            assert!((row.norm_sqr() - y[l]).abs() <= 1e-10 * scale * scale);
        }
        for _ in 0..5 {
            let a: Vec<M::Scalar> = random_vec(rng, model.n());
            let b: Vec<M::Scalar> = random_vec(rng, model.m());
            let lhs = dot(&model.forward(&a).unwrap(), &b);
            let rhs = dot(&a, &model.adjoint(&b).unwrap());
            assert!(
                (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0),
                "{lhs} vs {rhs}"
            );
        }
    }

    pub fn dot<T: Hypercomplex>(a: &[T], b: &[T]) -> f64 {
        crate::algebra::aleph(a)
            .iter()
            .zip(crate::algebra::aleph(b))
            .map(|(x, y)| x * y)
            .sum()
    }
}
