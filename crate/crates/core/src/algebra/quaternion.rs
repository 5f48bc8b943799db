use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use super::Hypercomplex;
use crate::error::{HprError, Result};

/// A quaternion `a + b i + c j + d k` with `i^2 = j^2 = k^2 = ijk = -1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    /// Pure quaternion `b i + c j + d k`.
    pub const fn pure(b: f64, c: f64, d: f64) -> Self {
        Self::new(0.0, b, c, d)
    }

    /// `cos(theta) + unit * sin(theta)` for a unit pure quaternion `unit`.
    pub fn exp_unit(unit: Quaternion, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Quaternion::new(c, unit.b * s, unit.c * s, unit.d * s)
    }

    pub fn vector_part(&self) -> [f64; 3] {
        [self.b, self.c, self.d]
    }

    /// `mu x mu^{-1}`: rotates the vector part of `x` about the vector part of `mu`.
    pub fn rotate(&self, mu: Quaternion) -> Result<Quaternion> {
        if mu.is_zero() {
            return Err(HprError::Domain("rotation by zero quaternion"));
        }
        Ok(mu * *self * mu.inverse()?)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.a, self.b, self.c, self.d)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.a + r.a, self.b + r.b, self.c + r.c, self.d + r.d)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.a - r.a, self.b - r.b, self.c - r.c, self.d - r.d)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.a, -self.b, -self.c, -self.d)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, r: Quaternion) -> Quaternion {
        let l = self;
        Quaternion::new(
            l.a * r.a - l.b * r.b - l.c * r.c - l.d * r.d,
            l.a * r.b + l.b * r.a + l.c * r.d - l.d * r.c,
            l.a * r.c - l.b * r.d + l.c * r.a + l.d * r.b,
            l.a * r.d + l.b * r.c - l.c * r.b + l.d * r.a,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, r: Quaternion) {
        *self = *self + r;
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, r: Quaternion) {
        *self = *self - r;
    }
}

impl Hypercomplex for Quaternion {
    const DIM: usize = 4;
    const NAME: &'static str = "quaternion";

    fn from_real(a: f64) -> Self {
        Quaternion::new(a, 0.0, 0.0, 0.0)
    }
    fn real(&self) -> f64 {
        self.a
    }
    #[inline]
    fn conj(&self) -> Self {
        Quaternion::new(self.a, -self.b, -self.c, -self.d)
    }
    #[inline]
    fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }
    fn write_coeffs(&self, out: &mut [f64]) {
        out[..4].copy_from_slice(&[self.a, self.b, self.c, self.d]);
    }
    fn from_coeffs(c: &[f64]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
    fn left_matrix(&self) -> Vec<f64> {
        let Quaternion { a, b, c, d } = *self;
        vec![
            a, -b, -c, -d, //
            b, a, -d, c, //
            c, d, a, -b, //
            d, -c, b, a,
        ]
    }
    fn right_matrix(&self) -> Vec<f64> {
        let Quaternion { a, b, c, d } = *self;
        vec![
            a, -b, -c, -d, //
            b, a, d, -c, //
            c, -d, a, b, //
            d, c, -b, a,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_relations() {
        use Quaternion as Q;
        assert_eq!(Q::I * Q::J, Q::K);
        assert_eq!(Q::J * Q::K, Q::I);
        assert_eq!(Q::K * Q::I, Q::J);
        assert_eq!(Q::J * Q::I, -Q::K);
        for u in [Q::I, Q::J, Q::K] {
            assert_eq!(u * u, -Q::ONE);
        }
        assert_eq!(Q::I * Q::J * Q::K, -Q::ONE);
    }

    #[test]
    fn conjugate_and_inverse() {
        let x = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(x.conj(), Quaternion::new(1.0, -2.0, -3.0, -4.0));
        assert_eq!(x.conj().conj(), x);

        let y = Quaternion::new(1.0, 1.0, 1.0, 1.0);
        assert_eq!(y.modulus(), 2.0);
        assert!((y * y.inverse().unwrap()).approx_eq(&Quaternion::ONE, 1e-15));
        assert!(Quaternion::ZERO.inverse().is_err());
        assert!(Quaternion::ZERO.sign().is_err());
        assert_eq!(Quaternion::ZERO.modulus(), 0.0);
    }

    #[test]
    fn sign_of_pure_imaginary() {
        assert_eq!((Quaternion::I * 3.0).sign().unwrap(), Quaternion::I);
    }

    #[test]
    fn rotation_examples() {
        let x = Quaternion::new(0.3, -1.0, 2.0, 0.5);
        assert_eq!(x.rotate(Quaternion::ONE).unwrap(), x);
        // j i j^{-1} = j i (-j) = (-k)(-j) = k j = -i
        let r = Quaternion::I.rotate(Quaternion::J).unwrap();
        assert!(r.approx_eq(&-Quaternion::I, 1e-15));
        let real = Quaternion::from_real(2.5);
        let mu = Quaternion::new(0.1, 0.7, -0.2, 1.3);
        assert!(real.rotate(mu).unwrap().approx_eq(&real, 1e-15));
        let rx = x.rotate(mu).unwrap();
        assert!((rx.a - x.a).abs() < 1e-14);
        assert!((rx.modulus() - x.modulus()).abs() < 1e-14);
        assert!(x.rotate(Quaternion::ZERO).is_err());
    }

    #[test]
    fn matrices_match_product() {
        let x = Quaternion::new(0.5, -1.5, 2.0, 0.25);
        let y = Quaternion::new(-0.75, 1.0, 0.5, 3.0);
        let xy = (x * y).coeffs();
        let l = x.left_matrix();
        let r = y.right_matrix();
        let yc = y.coeffs();
        let xc = x.coeffs();
        for i in 0..4 {
            let via_left: f64 = (0..4).map(|j| l[i * 4 + j] * yc[j]).sum();
            let via_right: f64 = (0..4).map(|j| r[i * 4 + j] * xc[j]).sum();
            assert!((via_left - xy[i]).abs() < 1e-14);
            assert!((via_right - xy[i]).abs() < 1e-14);
        }
    }
}
