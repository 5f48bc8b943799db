use crate::algebra::Octonion;
use crate::error::{check_len, HprError, Result};

use super::qdft::Twiddles;

/// Tri-variate octonion DFT on an `N x N x N` volume:
///
/// `F(k1,k2,k3) = 1/N sum_n ((f(n) K1) K2) K3`, with
/// `K1 = e^{-e1 2 pi k1 n1 / N}`, `K2 = e^{-e2 2 pi k2 n2 / N}`,
/// `K3 = e^{-e4 2 pi k3 n3 / N}`.
///
/// The kernels are right-multiplied in that order and parenthesised left to
/// right; with a non-associative algebra the bracketing is part of the
/// definition. Volumes are stored with `n1` slowest and `n3` fastest.
#[derive(Debug, Clone)]
pub struct Odft3D {
    n: usize,
    tw: Twiddles,
}

/// Imaginary units of the three kernels, one per axis.
pub const ODFT_UNITS: [usize; 3] = [1, 2, 4];

impl Odft3D {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(HprError::InvalidParameter(
                "ODFT size must be positive".into(),
            ));
        }
        Ok(Odft3D {
            n,
            tw: Twiddles::new(n),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn forward(&self, f: &[Octonion]) -> Result<Vec<Octonion>> {
        check_len(self.n.pow(3), f.len())?;
        let mut v = f.to_vec();
        for axis in 0..3 {
            v = self.axis_pass(&v, axis, 1.0);
        }
        let s = 1.0 / self.n as f64;
        Ok(v.into_iter().map(|x| x * s).collect())
    }

    /// Undoes [`Odft3D::forward`]: axes in reverse order with conjugated
    /// kernels, total normalisation `1/N^2`.
    pub fn inverse(&self, f: &[Octonion]) -> Result<Vec<Octonion>> {
        check_len(self.n.pow(3), f.len())?;
        let mut v = f.to_vec();
        for axis in (0..3).rev() {
            v = self.axis_pass(&v, axis, -1.0);
        }
        let s = 1.0 / (self.n * self.n) as f64;
        Ok(v.into_iter().map(|x| x * s).collect())
    }

    /// `g(.., k, ..) = sum_t f(.., t, ..) e^{-u 2 pi k t / N}` along `axis`,
    /// where `u` is the axis unit. Right multiplication distributes over the
    /// sums of the other axes, so the chain factorises into three passes.
    fn axis_pass(&self, f: &[Octonion], axis: usize, dir: f64) -> Vec<Octonion> {
        let n = self.n;
        let stride = n.pow(2 - axis as u32);
        let unit = ODFT_UNITS[axis];
        let mut out = vec![Octonion::ZERO; f.len()];
        for base in 0..f.len() {
            if !(base / stride).is_multiple_of(n) {
                continue;
            }
            for k in 0..n {
                let mut acc = Octonion::ZERO;
                for t in 0..n {
                    let (c, s) = self.tw.at(k, t);
                    let kern = Octonion::from_real_unit(c, unit, -dir * s);
                    acc += f[base + t * stride] * kern;
                }
                out[base + k * stride] = acc;
            }
        }
        out
    }
}

impl Octonion {
    /// `a + b e_unit`.
    pub fn from_real_unit(a: f64, unit: usize, b: f64) -> Octonion {
        let mut c = [0.0; 8];
        c[0] = a;
        c[unit] += b;
        Octonion(c)
    }
}
