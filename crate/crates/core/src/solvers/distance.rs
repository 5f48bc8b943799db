use nalgebra::{DVector, SMatrix, SVector};

use crate::algebra::{aleph, gimel_column, norm, Hypercomplex, Octonion, Quaternion};
use crate::rng::{normal, rng_from_seed};

/// `min_w |x_est - x w|` over unit `w` for an associative algebra, with the
/// minimiser `w = sign(x^* x_est)`. Returns `|x_est|` when `x = 0`.
pub fn phase_distance<T: Hypercomplex>(x_est: &[T], x: &[T]) -> f64 {
    residual(x_est, x, phase_factor(x_est, x))
}

/// The unit right factor `w = sign(sum conj(x_i) x_est_i)` attaining
/// [`phase_distance`]; `1` when the sum vanishes.
pub fn phase_factor<T: Hypercomplex>(x_est: &[T], x: &[T]) -> T {
    assert_eq!(
        x_est.len(),
        x.len(),
        "distance between vectors of different length"
    );
    let s = x
        .iter()
        .zip(x_est)
        .fold(T::zero(), |acc, (&a, &b)| acc + a.conj() * b);
    s.sign().unwrap_or_else(|_| T::one())
}

/// Quaternion distance modulo a right unit factor.
pub fn quat_distance(x_est: &[Quaternion], x: &[Quaternion]) -> f64 {
    phase_distance(x_est, x)
}

/// `|aleph(x_est) - gimel(x) g|` with
/// `g = sign((gimel(x)^T aleph(x_est)) (gimel(x)^T gimel(x))^{-1})`, where
/// `gimel(x)` is the `8n x 8` lift of `z -> x z`. Falls back to sampling unit
/// octonions when the normal matrix is singular or the projection vanishes.
pub fn oct_distance(x_est: &[Octonion], x: &[Octonion]) -> f64 {
    residual(x_est, x, oct_factor(x_est, x))
}

/// The unit octonion used by [`oct_distance`].
pub fn oct_factor(x_est: &[Octonion], x: &[Octonion]) -> Octonion {
    assert_eq!(
        x_est.len(),
        x.len(),
        "distance between vectors of different length"
    );
    let g = gimel_column(x);
    let b = DVector::from_vec(aleph(x_est));
    let gram: SMatrix<f64, 8, 8> = SMatrix::from_iterator((g.transpose() * &g).iter().copied());
    let rhs: SVector<f64, 8> = SVector::from_iterator((g.transpose() * &b).iter().copied());
    match gram.cholesky().map(|c| c.solve(&rhs)) {
        Some(v) if v.norm() > 0.0 && v.norm().is_finite() => {
            Octonion(std::array::from_fn(|i| v[i] / v.norm()))
        }
        _ => sampled_oct_factor(x_est, x, 10_000, 0),
    }
}

/// `min` over `samples` random unit octonions `z` of `|x_est - x z|`.
pub fn sampled_oct_distance(x_est: &[Octonion], x: &[Octonion], samples: usize, seed: u64) -> f64 {
    residual(x_est, x, sampled_oct_factor(x_est, x, samples, seed)).min(norm(x_est))
}

fn sampled_oct_factor(x_est: &[Octonion], x: &[Octonion], samples: usize, seed: u64) -> Octonion {
    let mut rng = rng_from_seed(seed);
    let mut best = (f64::INFINITY, Octonion::ONE);
    for _ in 0..samples {
        let z = Octonion(std::array::from_fn(|_| normal(&mut rng)));
        let Ok(z) = z.sign() else { continue };
        let d = residual(x_est, x, z);
        if d < best.0 {
            best = (d, z);
        }
    }
    best.1
}

fn residual<T: Hypercomplex>(x_est: &[T], x: &[T], w: T) -> f64 {
    x_est
        .iter()
        .zip(x)
        .map(|(&e, &v)| (e - v * w).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::sensing::testutil::random_vec;

    #[test]
    fn quaternion_trivial_cases() {
        let mut rng = rng_from_seed(1);
        let x: Vec<Quaternion> = random_vec(&mut rng, 5);
        assert!(quat_distance(&x, &x) < 1e-14);
        let xj: Vec<Quaternion> = x.iter().map(|&v| v * Quaternion::J).collect();
        assert!(quat_distance(&xj, &x) < 1e-12);
        let zero = vec![Quaternion::ZERO; 5];
        assert_eq!(quat_distance(&x, &zero), norm(&x));
    }

    #[test]
    fn quaternion_invariance_under_unit_factors() {
        let mut rng = rng_from_seed(2);
        let x: Vec<Quaternion> = random_vec(&mut rng, 4);
        for _ in 0..100 {
            let w = random_vec::<Quaternion>(&mut rng, 1)[0].sign().unwrap();
            let xw: Vec<Quaternion> = x.iter().map(|&v| v * w).collect();
            assert!(quat_distance(&xw, &x) < 1e-10);
        }
    }

    #[test]
    fn quaternion_closed_form_beats_sampling() {
        let mut rng = rng_from_seed(3);
        let x: Vec<Quaternion> = random_vec(&mut rng, 3);
        let e: Vec<Quaternion> = random_vec(&mut rng, 3);
        let closed = quat_distance(&e, &x);
        let mut best = f64::INFINITY;
        for _ in 0..10_000 {
            let w = random_vec::<Quaternion>(&mut rng, 1)[0].sign().unwrap();
            let d: f64 = e
                .iter()
                .zip(&x)
                .map(|(&a, &b)| (a - b * w).norm_sqr())
                .sum::<f64>()
                .sqrt();
            best = best.min(d);
        }
        assert!(closed <= best + 1e-6);
    }

    #[test]
    fn octonion_trivial_cases() {
        let mut rng = rng_from_seed(4);
        let x: Vec<Octonion> = random_vec(&mut rng, 4);
        assert!(oct_distance(&x, &x) < 1e-12);
        let x3: Vec<Octonion> = x.iter().map(|&v| v * Octonion::basis(3)).collect();
        assert!(oct_distance(&x3, &x) < 1e-10);
        for _ in 0..100 {
            let w = random_vec::<Octonion>(&mut rng, 1)[0].sign().unwrap();
            let xw: Vec<Octonion> = x.iter().map(|&v| v * w).collect();
            assert!(oct_distance(&xw, &x) < 1e-10);
        }
    }

    #[test]
    fn octonion_closed_form_beats_sampling() {
        let mut rng = rng_from_seed(5);
        let x: Vec<Octonion> = random_vec(&mut rng, 3);
        let e: Vec<Octonion> = random_vec(&mut rng, 3);
        let closed = oct_distance(&e, &x);
        let sampled = sampled_oct_distance(&e, &x, 100_000, 6);
        assert!(closed <= sampled + 1e-4);
    }

    #[test]
    fn octonion_zero_reference_falls_back() {
        let mut rng = rng_from_seed(7);
        let e: Vec<Octonion> = random_vec(&mut rng, 2);
        let d = oct_distance(&e, &[Octonion::ZERO; 2]);
        assert!((d - norm(&e)).abs() < 1e-12);
    }
}
