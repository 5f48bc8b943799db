use crate::algebra::{aleph, aleph_inv, Hypercomplex, Octonion};
use crate::error::{check_len, Result};
use crate::sensing::{RealLift, SensingModel};

/// `f(x) = 1/(2m) sum (|a_l^* x|^2 - y_l)^2`.
pub fn qwf_cost<M: SensingModel + ?Sized>(model: &M, y: &[f64], x: &[M::Scalar]) -> Result<f64> {
    Ok(residual_energy(model, y, x)? / (2.0 * model.m() as f64))
}

/// Closed-form descent direction `(1/m) sum (|a_l^* x|^2 - y_l) a_l (a_l^* x)`.
///
/// In real coordinates the gradient of [`qwf_cost`] is exactly twice this;
/// the factor is absorbed into the step size.
pub fn qwf_gradient<M: SensingModel + ?Sized>(
    model: &M,
    y: &[f64],
    x: &[M::Scalar],
) -> Result<Vec<M::Scalar>> {
    check_len(model.m(), y.len())?;
    let m = model.m() as f64;
    let u = model.forward(x)?;
    let weighted: Vec<M::Scalar> = u
        .iter()
        .zip(y)
        .map(|(&ul, &yl)| ul * ((ul.norm_sqr() - yl) / m))
        .collect();
    model.adjoint(&weighted)
}

/// `1/(4m) sum (|G_l z|^2 - y_l)^2` on the real representation `z = aleph(x)`.
pub fn owf_cost<M: SensingModel<Scalar = Octonion> + ?Sized>(
    model: &M,
    y: &[f64],
    z: &[f64],
) -> Result<f64> {
    let x: Vec<Octonion> = aleph_inv(z)?;
    Ok(residual_energy(model, y, &x)? / (4.0 * model.m() as f64))
}

/// `(1/m) sum (|G_l z|^2 - y_l) G_l^T G_l z`, the exact gradient of [`owf_cost`].
pub fn owf_gradient<M: SensingModel<Scalar = Octonion> + ?Sized>(
    model: &M,
    y: &[f64],
    z: &[f64],
) -> Result<Vec<f64>> {
    check_len(model.m(), y.len())?;
    let lift = RealLift::new(model);
    let gz = lift.apply(z)?;
    let m = model.m() as f64;
    let mut w = gz.clone();
    for (l, chunk) in w.chunks_exact_mut(8).enumerate() {
        let r = chunk.iter().map(|v| v * v).sum::<f64>() - y[l];
        chunk.iter_mut().for_each(|v| *v *= r / m);
    }
    lift.adjoint_apply(&w)
}

fn residual_energy<M: SensingModel + ?Sized>(model: &M, y: &[f64], x: &[M::Scalar]) -> Result<f64> {
    check_len(model.m(), y.len())?;
    Ok(model
        .forward(x)?
        .iter()
        .zip(y)
        .map(|(u, &yl)| (u.norm_sqr() - yl).powi(2))
        .sum())
}

/// Central differences with step `h * max(|z_i|, 1)` per coordinate.
pub fn finite_difference(f: impl Fn(&[f64]) -> f64, z: &[f64], h: f64) -> Vec<f64> {
    let mut p = z.to_vec();
    (0..z.len())
        .map(|i| {
            let step = h * z[i].abs().max(1.0);
            p[i] = z[i] + step;
            let hi = f(&p);
            p[i] = z[i] - step;
            let lo = f(&p);
            p[i] = z[i];
            (hi - lo) / (2.0 * step)
        })
        .collect()
}

/// Real-coordinate gradient of [`qwf_cost`] from the closed form.
pub fn qwf_real_gradient<M: SensingModel + ?Sized>(
    model: &M,
    y: &[f64],
    x: &[M::Scalar],
) -> Result<Vec<f64>> {
    Ok(aleph(&qwf_gradient(model, y, x)?)
        .iter()
        .map(|v| 2.0 * v)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Quaternion;
    use crate::rng::rng_from_seed;
    use crate::sensing::testutil::random_vec;
    use crate::sensing::{measure, CodedFourier, DenseModel, DoeAlphabet};

    fn rel_err(a: &[f64], b: &[f64]) -> f64 {
        let num: f64 = a
            .iter()
            .zip(b)
            .map(|(p, q)| (p - q).powi(2))
            .sum::<f64>()
            .sqrt();
        let den: f64 = b.iter().map(|q| q * q).sum::<f64>().sqrt();
        num / den
    }

    #[test]
    fn qwf_gradient_matches_finite_differences() {
        let mut rng = rng_from_seed(1);
        let model = DenseModel::<Quaternion>::gaussian(40, 4, 2).unwrap();
        let truth: Vec<Quaternion> = random_vec(&mut rng, 4);
        let y = measure(&model, &truth).unwrap();
        for _ in 0..20 {
            let x: Vec<Quaternion> = random_vec(&mut rng, 4);
            let closed = qwf_real_gradient(&model, &y, &x).unwrap();
            let fd = finite_difference(
                |z| qwf_cost(&model, &y, &aleph_inv::<Quaternion>(z).unwrap()).unwrap(),
                &aleph(&x),
                1e-6,
            );
            assert!(rel_err(&closed, &fd) < 1e-6, "{}", rel_err(&closed, &fd));
        }
    }

    #[test]
    fn qwf_gradient_on_two_sided_rows() {
        let mut rng = rng_from_seed(3);
        let model = CodedFourier::new(2, 3, &DoeAlphabet::standard(8).unwrap(), 4).unwrap();
        let y = measure(&model, &random_vec::<Quaternion>(&mut rng, 4)).unwrap();
        let x: Vec<Quaternion> = random_vec(&mut rng, 4);
        let closed = qwf_real_gradient(&model, &y, &x).unwrap();
        let fd = finite_difference(
            |z| qwf_cost(&model, &y, &aleph_inv::<Quaternion>(z).unwrap()).unwrap(),
            &aleph(&x),
            1e-6,
        );
        assert!(rel_err(&closed, &fd) < 1e-6);
    }

    #[test]
    fn owf_gradient_matches_finite_differences() {
        let mut rng = rng_from_seed(5);
        let model = DenseModel::<Octonion>::gaussian(30, 3, 6).unwrap();
        let y = measure(&model, &random_vec::<Octonion>(&mut rng, 3)).unwrap();
        for _ in 0..20 {
            let z = aleph(&random_vec::<Octonion>(&mut rng, 3));
            let closed = owf_gradient(&model, &y, &z).unwrap();
            let fd = finite_difference(|p| owf_cost(&model, &y, p).unwrap(), &z, 1e-6);
            assert!(rel_err(&closed, &fd) < 1e-6);
        }
    }

    #[test]
    fn zero_at_ground_truth() {
        let mut rng = rng_from_seed(7);
        let q = DenseModel::<Quaternion>::gaussian(20, 3, 8).unwrap();
        let x: Vec<Quaternion> = random_vec(&mut rng, 3);
        let y = measure(&q, &x).unwrap();
        assert!(qwf_gradient(&q, &y, &x)
            .unwrap()
            .iter()
            .all(|g| g.modulus() < 1e-10));

        let o = DenseModel::<Octonion>::gaussian(20, 3, 9).unwrap();
        let x: Vec<Octonion> = random_vec(&mut rng, 3);
        let y = measure(&o, &x).unwrap();
        assert!(owf_gradient(&o, &y, &aleph(&x))
            .unwrap()
            .iter()
            .all(|g| g.abs() < 1e-10));
    }
}
