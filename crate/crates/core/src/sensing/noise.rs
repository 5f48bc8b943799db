use crate::error::{HprError, Result};
use crate::rng::{normal, rng_from_seed};

/// Adds i.i.d. Gaussian noise at `snr_db = 10 log10(|y|^2 / E|eta|^2)` and
/// clamps the result at zero, since intensities cannot be negative.
/// `f64::INFINITY` returns `y` unchanged.
pub fn add_noise(y: &[f64], snr_db: f64, seed: u64) -> Result<Vec<f64>> {
    if snr_db == f64::INFINITY {
        return Ok(y.to_vec());
    }
    let eta = noise_for(y, snr_db, seed)?;
    Ok(y.iter()
        .zip(&eta)
        .map(|(&v, &e)| (v + e).max(0.0))
        .collect())
}

/// The unclamped noise draw `eta` used by [`add_noise`].
pub fn noise_for(y: &[f64], snr_db: f64, seed: u64) -> Result<Vec<f64>> {
    if snr_db == f64::INFINITY {
        return Ok(vec![0.0; y.len()]);
    }
    if !snr_db.is_finite() {
        return Err(HprError::InvalidParameter(format!(
            "SNR must be finite or +inf, got {snr_db}"
        )));
    }
    let energy: f64 = y.iter().map(|v| v * v).sum();
    if energy == 0.0 || y.is_empty() {
        return Err(HprError::Domain("cannot scale noise to a zero signal"));
    }
    let sigma = (energy / y.len() as f64 / 10f64.powf(snr_db / 10.0)).sqrt();
    let mut rng = rng_from_seed(seed);
    Ok(y.iter().map(|_| sigma * normal(&mut rng)).collect())
}
