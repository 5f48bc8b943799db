use nalgebra::{Matrix4, SymmetricEigen};

use super::{ScaleRule, SolverConfig, SpectralWeighting};
use crate::algebra::{aleph, aleph_inv, Hypercomplex, Quaternion};
use crate::error::{check_len, HprError, Result};
use crate::rng::{normal, rng_from_seed};
use crate::sensing::{RealLift, SensingModel};

/// Spectral estimate and whether the data were identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralInit<T> {
    pub estimate: Vec<T>,
    pub zero_data: bool,
    /// Rayleigh quotient of the returned direction (shift removed).
    pub eigenvalue: f64,
    pub iterations: usize,
}

/// Leading eigenvector of `Y = (1/m) sum w_l a_l a_l^*`, found by power
/// iteration on the real lift `(1/m) G^T diag(w) G`, mapped back with
/// `aleph^{-1}` and scaled to the estimated signal norm `sqrt(mean(y) / rho)`,
/// where `rho` is the operator's [`entry_energy`](SensingModel::entry_energy).
pub fn spectral_init<M: SensingModel + ?Sized>(
    model: &M,
    y: &[f64],
    config: &SolverConfig,
) -> Result<SpectralInit<M::Scalar>> {
    check_len(model.m(), y.len())?;
    let d = M::Scalar::DIM;
    let (m, n) = (model.m(), model.n());
    let mean_y = y.iter().sum::<f64>() / m as f64;
    if y.iter().all(|&v| v == 0.0) {
        return Ok(SpectralInit {
            estimate: vec![M::Scalar::zero(); n],
            zero_data: true,
            eigenvalue: 0.0,
            iterations: 0,
        });
    }
    if y.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(HprError::InvalidParameter(
            "intensities must be finite and nonnegative".into(),
        ));
    }
    let weighting = config.weighting.unwrap_or(if d == 8 {
        SpectralWeighting::Optimal
    } else {
        SpectralWeighting::Plain
    });
    let w = weights(weighting, y, mean_y, m as f64 / (d * n) as f64);

    // Negative weights make Y indefinite; shift so the top of the spectrum
    // is also the largest in magnitude.
    let mut shift = 0.0;
    if w.iter().any(|&v| v < 0.0) {
        for (l, &wl) in w.iter().enumerate() {
            if wl < 0.0 {
                shift -= wl * model.row(l)?.norm_sqr_bound();
            }
        }
        shift /= m as f64;
    }

    let lift = RealLift::new(model);
    let apply = |v: &[f64]| -> Result<Vec<f64>> {
        let mut gv = lift.apply(v)?;
        for (l, chunk) in gv.chunks_exact_mut(d).enumerate() {
            chunk.iter_mut().for_each(|c| *c *= w[l] / m as f64);
        }
        let mut out = lift.adjoint_apply(&gv)?;
        for (o, &vi) in out.iter_mut().zip(v) {
            *o += shift * vi;
        }
        Ok(out)
    };
    let mut rng = rng_from_seed(config.seed);
    let start: Vec<f64> = (0..d * n).map(|_| normal(&mut rng)).collect();
    let (v, lambda, iterations) = power_method(apply, start, config.power_iters, config.power_tol)?;

    // E[y] = rho |x|^2, with rho = 1 for unit-variance Gaussian rows.
    let rho = model.entry_energy()?;
    let r = match config.scale_rule {
        ScaleRule::MeanIntensity => (mean_y / rho).sqrt(),
        ScaleRule::RootMeanSquare => {
            (y.iter().map(|v| v * v).sum::<f64>() / m as f64 / (rho * rho)).sqrt()
        }
    };
    let scaled: Vec<f64> = v.iter().map(|c| c * r).collect();
    Ok(SpectralInit {
        estimate: aleph_inv(&scaled)?,
        zero_data: false,
        eigenvalue: lambda - shift,
        iterations,
    })
}

fn weights(kind: SpectralWeighting, y: &[f64], mean_y: f64, delta: f64) -> Vec<f64> {
    match kind {
        SpectralWeighting::Plain => y.to_vec(),
        SpectralWeighting::Truncated { alpha } => y
            .iter()
            .map(|&v| if v <= alpha * mean_y { v } else { 0.0 })
            .collect(),
        SpectralWeighting::Optimal if delta > 1.0 => {
            let sd = delta.sqrt();
            y.iter()
                .map(|&v| {
                    let s = v / mean_y;
                    (s - 1.0) / (s + sd - 1.0)
                })
                .collect()
        }
        SpectralWeighting::Optimal => y.to_vec(),
    }
}

/// Power iteration from `start`. Stops after `iters` steps or when successive
/// Rayleigh quotients differ by less than `tol` relative. Returns the unit
/// vector, its Rayleigh quotient and the number of steps taken.
pub fn power_method(
    apply: impl Fn(&[f64]) -> Result<Vec<f64>>,
    start: Vec<f64>,
    iters: usize,
    tol: f64,
) -> Result<(Vec<f64>, f64, usize)> {
    let mut v = normalized(start).ok_or(HprError::Domain("zero start vector"))?;
    let mut lambda = f64::NAN;
    for it in 1..=iters {
        let av = apply(&v)?;
        let next_lambda: f64 = av.iter().zip(&v).map(|(a, b)| a * b).sum();
        let Some(next) = normalized(av) else {
            return Ok((v, 0.0, it));
        };
        v = next;
        let done = (next_lambda - lambda).abs() <= tol * next_lambda.abs();
        lambda = next_lambda;
        if done {
            return Ok((v, lambda, it));
        }
    }
    Ok((v, lambda, iters))
}

fn normalized(mut v: Vec<f64>) -> Option<Vec<f64>> {
    let nrm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if nrm == 0.0 || !nrm.is_finite() {
        return None;
    }
    v.iter_mut().for_each(|c| *c /= nrm);
    Some(v)
}

/// Right-multiplies `x` by the unit `w` that makes it as close to purely
/// imaginary as possible, i.e. minimises `sum Re(x_i w)^2`.
///
/// `Re(x w) = <aleph(conj x), aleph(w)>`, so `w` is the eigenvector of the
/// smallest eigenvalue of `sum aleph(conj x_i) aleph(conj x_i)^T`.
pub fn align_pure(x: &[Quaternion]) -> Vec<Quaternion> {
    let mut gram = Matrix4::<f64>::zeros();
    for xi in x {
        let c = aleph(&[xi.conj()]);
        for r in 0..4 {
            for s in 0..4 {
                gram[(r, s)] += c[r] * c[s];
            }
        }
    }
    let eig = SymmetricEigen::new(gram);
    let k = eig.eigenvalues.imin();
    let col = eig.eigenvectors.column(k);
    let w = Quaternion::new(col[0], col[1], col[2], col[3]);
    x.iter().map(|&v| v * w).collect()
}
