//! Shared fixtures for the benchmarks.

use hpr_core::harness::gaussian_signal;
use hpr_core::sensing::{measure, DenseModel};
use hpr_core::{Hypercomplex, Result};

/// Dense Gaussian model with `m = ratio * n` rows, a random signal and its
/// noiseless intensities.
pub struct Fixture<T: Hypercomplex> {
    pub model: DenseModel<T>,
    pub signal: Vec<T>,
    pub y: Vec<f64>,
}

pub fn gaussian_fixture<T: Hypercomplex>(n: usize, ratio: usize, seed: u64) -> Result<Fixture<T>> {
    let model = DenseModel::gaussian(ratio * n, n, seed)?;
    let signal = gaussian_signal(n, seed.wrapping_add(1));
    let y = measure(&model, &signal)?;
    Ok(Fixture { model, signal, y })
}
