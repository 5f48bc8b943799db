use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{HprError, Result};

/// A finite-dimensional real algebra with conjugation and a multiplicative norm.
///
/// Implemented by [`Real`], [`Quaternion`](super::Quaternion) and
/// [`Octonion`](super::Octonion). The real representation maps
/// `aleph`/`gimel` are expressed through [`Hypercomplex::write_coeffs`] and
/// [`Hypercomplex::left_matrix`], with the defining property
/// `aleph(x * y) == left_matrix(x) * aleph(y)`.
pub trait Hypercomplex:
    Copy
    + Debug
    + PartialEq
    + Default
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + AddAssign
    + SubAssign
    + 'static
{
    /// Number of real coefficients.
    const DIM: usize;
    /// Short name used in reports ("real", "quaternion", "octonion").
    const NAME: &'static str;

    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::from_real(1.0)
    }
    fn from_real(a: f64) -> Self;
    fn real(&self) -> f64;
    fn conj(&self) -> Self;
    fn norm_sqr(&self) -> f64;

    /// Writes the `DIM` coefficients into `out[..DIM]`.
    fn write_coeffs(&self, out: &mut [f64]);
    /// Reads `DIM` coefficients from `c[..DIM]`.
    fn from_coeffs(c: &[f64]) -> Self;

    /// Row-major `DIM x DIM` real matrix of `y -> self * y`.
    fn left_matrix(&self) -> Vec<f64>;
    /// Row-major `DIM x DIM` real matrix of `y -> y * self`.
    fn right_matrix(&self) -> Vec<f64>;

    fn modulus(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    fn is_zero(&self) -> bool {
        self.norm_sqr() == 0.0
    }

    /// `x^{-1} = x* / |x|^2`.
    fn inverse(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(HprError::Domain("inverse of zero"));
        }
        Ok(self.conj() * (1.0 / n2))
    }

    /// `x / |x|`.
    fn sign(&self) -> Result<Self> {
        let n = self.modulus();
        if n == 0.0 {
            return Err(HprError::Domain("sign of zero"));
        }
        Ok(*self * (1.0 / n))
    }

    fn coeffs(&self) -> Vec<f64> {
        let mut v = vec![0.0; Self::DIM];
        self.write_coeffs(&mut v);
        v
    }

    /// Component-wise comparison with a relative tolerance scaled by the
    /// larger modulus (absolute below 1).
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.modulus().max(other.modulus()).max(1.0);
        (*self - *other).modulus() <= tol * scale
    }
}

/// Default tolerance used by `approx_eq` callers throughout the crate.
pub const DEFAULT_TOL: f64 = 1e-12;

/// The real numbers as a one-dimensional algebra; lets the solvers run plain
/// real Wirtinger flow for baseline comparisons.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct Real(pub f64);

impl Add for Real {
    type Output = Real;
    fn add(self, rhs: Real) -> Real {
        Real(self.0 + rhs.0)
    }
}

impl Sub for Real {
    type Output = Real;
    fn sub(self, rhs: Real) -> Real {
        Real(self.0 - rhs.0)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Mul for Real {
    type Output = Real;
    fn mul(self, rhs: Real) -> Real {
        Real(self.0 * rhs.0)
    }
}

impl Mul<f64> for Real {
    type Output = Real;
    fn mul(self, rhs: f64) -> Real {
        Real(self.0 * rhs)
    }
}

impl AddAssign for Real {
    fn add_assign(&mut self, rhs: Real) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Real {
    fn sub_assign(&mut self, rhs: Real) {
        self.0 -= rhs.0;
    }
}

impl Hypercomplex for Real {
    const DIM: usize = 1;
    const NAME: &'static str = "real";

    fn from_real(a: f64) -> Self {
        Real(a)
    }
    fn real(&self) -> f64 {
        self.0
    }
    fn conj(&self) -> Self {
        *self
    }
    fn norm_sqr(&self) -> f64 {
        self.0 * self.0
    }
    fn write_coeffs(&self, out: &mut [f64]) {
        out[0] = self.0;
    }
    fn from_coeffs(c: &[f64]) -> Self {
        Real(c[0])
    }
    fn left_matrix(&self) -> Vec<f64> {
        vec![self.0]
    }
    fn right_matrix(&self) -> Vec<f64> {
        vec![self.0]
    }
}
