use std::f64::consts::PI;

use crate::algebra::Quaternion;
use crate::error::{check_len, HprError, Result};

/// `e^{-i theta} q` without a full Hamilton product.
#[inline]
pub(crate) fn left_exp_i(cos: f64, sin: f64, q: Quaternion) -> Quaternion {
    Quaternion::new(
        cos * q.a + sin * q.b,
        cos * q.b - sin * q.a,
        cos * q.c + sin * q.d,
        cos * q.d - sin * q.c,
    )
}

/// `q e^{-j theta}` without a full Hamilton product.
#[inline]
pub(crate) fn right_exp_j(cos: f64, sin: f64, q: Quaternion) -> Quaternion {
    Quaternion::new(
        cos * q.a + sin * q.c,
        cos * q.b + sin * q.d,
        cos * q.c - sin * q.a,
        cos * q.d - sin * q.b,
    )
}

/// Twiddle tables `cos(2 pi t / N)`, `sin(2 pi t / N)` for `t = 0..N`.
#[derive(Debug, Clone)]
pub(crate) struct Twiddles {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl Twiddles {
    pub fn new(n: usize) -> Self {
        let (sin, cos) = (0..n)
            .map(|t| (2.0 * PI * t as f64 / n as f64).sin_cos())
            .unzip();
        Twiddles { cos, sin }
    }

    /// `(cos, sin)` of `2 pi (a b mod N) / N`.
    #[inline]
    pub fn at(&self, a: usize, b: usize) -> (f64, f64) {
        let t = (a * b) % self.cos.len();
        (self.cos[t], self.sin[t])
    }
}

/// Two-sided 2-D quaternion DFT on an `N x N` grid:
///
/// `F(r, s) = 1/N sum_{q,b} e^{-i 2 pi r q / N} f(q, b) e^{-j 2 pi s b / N}`.
///
/// Images are row-major with `q` the row index and `b` the column index.
/// Evaluated by row-column passes that keep the `i` kernel on the left and
/// the `j` kernel on the right.
#[derive(Debug, Clone)]
pub struct Qdft2D {
    n: usize,
    tw: Twiddles,
}

impl Qdft2D {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(HprError::InvalidParameter(
                "QDFT size must be positive".into(),
            ));
        }
        Ok(Qdft2D {
            n,
            tw: Twiddles::new(n),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn forward(&self, f: &[Quaternion]) -> Result<Vec<Quaternion>> {
        self.apply(f, 1.0)
    }

    /// Conjugated kernels with the same `1/N`, so `inverse(forward(f)) == f`.
    pub fn inverse(&self, f: &[Quaternion]) -> Result<Vec<Quaternion>> {
        self.apply(f, -1.0)
    }

    fn apply(&self, f: &[Quaternion], dir: f64) -> Result<Vec<Quaternion>> {
        let n = self.n;
        check_len(n * n, f.len())?;
        let mut tmp = vec![Quaternion::ZERO; n * n];
        self.pass_left(f, &mut tmp, dir);
        let mut out = vec![Quaternion::ZERO; n * n];
        self.pass_right(&tmp, &mut out, dir);
        Ok(out)
    }

    /// `g(r, b) = sum_q e^{-i 2 pi r q / N} f(q, b)`
    fn pass_left(&self, f: &[Quaternion], g: &mut [Quaternion], dir: f64) {
        let n = self.n;
        for r in 0..n {
            let out_row = &mut g[r * n..(r + 1) * n];
            for q in 0..n {
                let (c, s) = self.tw.at(r, q);
                let s = dir * s;
                let in_row = &f[q * n..(q + 1) * n];
                for (o, &v) in out_row.iter_mut().zip(in_row) {
                    *o += left_exp_i(c, s, v);
                }
            }
        }
    }

    /// `F(r, s) = 1/N sum_b g(r, b) e^{-j 2 pi s b / N}`
    fn pass_right(&self, g: &[Quaternion], out: &mut [Quaternion], dir: f64) {
        let n = self.n;
        let scale = 1.0 / n as f64;
        for r in 0..n {
            let in_row = &g[r * n..(r + 1) * n];
            for s in 0..n {
                let mut acc = Quaternion::ZERO;
                for (b, &v) in in_row.iter().enumerate() {
                    let (c, sn) = self.tw.at(s, b);
                    acc += right_exp_j(c, dir * sn, v);
                }
                out[r * n + s] = acc * scale;
            }
        }
    }

    /// The functional `x -> F_Q(x)(r, s)` as a left/right kernel pair.
    pub fn row(&self, r: usize, s: usize) -> Result<QdftRow> {
        let n = self.n;
        for idx in [r, s] {
            if idx >= n {
                return Err(HprError::Index { index: idx, len: n });
            }
        }
        let left = (0..n)
            .map(|q| {
                let (c, sn) = self.tw.at(r, q);
                Quaternion::new(c, -sn, 0.0, 0.0)
            })
            .collect();
        let right = (0..n)
            .map(|b| {
                let (c, sn) = self.tw.at(s, b);
                Quaternion::new(c, 0.0, -sn, 0.0)
            })
            .collect();
        Ok(QdftRow {
            n,
            left,
            right,
            scale: 1.0 / n as f64,
        })
    }
}

/// One output coefficient of the two-sided QDFT:
/// `x -> scale * sum_{q,b} left[q] x(q, b) right[b]`.
///
/// Two-sidedness means this is not a single quaternion inner product, so the
/// row keeps the two kernel vectors separately.
#[derive(Debug, Clone, PartialEq)]
pub struct QdftRow {
    pub n: usize,
    pub left: Vec<Quaternion>,
    pub right: Vec<Quaternion>,
    pub scale: f64,
}

impl QdftRow {
    pub fn apply(&self, x: &[Quaternion]) -> Result<Quaternion> {
        check_len(self.n * self.n, x.len())?;
        let mut acc = Quaternion::ZERO;
        for q in 0..self.n {
            for b in 0..self.n {
                acc += self.left[q] * x[q * self.n + b] * self.right[b];
            }
        }
        Ok(acc * self.scale)
    }

    /// Left and right factors acting on pixel `p = q N + b`, scale folded into the left factor.
    pub fn factors(&self, p: usize) -> (Quaternion, Quaternion) {
        let (q, b) = (p / self.n, p % self.n);
        (self.left[q] * self.scale, self.right[b])
    }
}

/// Unitary 1-D quaternion DFT with the `i` kernel on the left:
/// `F(s) = 1/sqrt(N) sum_q e^{-i 2 pi s q / N} f(q)`.
pub fn qdft_1d(f: &[Quaternion]) -> Vec<Quaternion> {
    let n = f.len();
    let tw = Twiddles::new(n);
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|s| {
            f.iter().enumerate().fold(Quaternion::ZERO, |acc, (q, &v)| {
                let (c, sn) = tw.at(s, q);
                acc + left_exp_i(c, sn, v)
            }) * scale
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{norm, Hypercomplex};
    use crate::rng::{normal, rng_from_seed};

    fn random_image(n: usize, seed: u64) -> Vec<Quaternion> {
        let mut rng = rng_from_seed(seed);
        (0..n * n)
            .map(|_| {
                Quaternion::new(
                    normal(&mut rng),
                    normal(&mut rng),
                    normal(&mut rng),
                    normal(&mut rng),
                )
            })
            .collect()
    }

    /// Literal double sum, the definition itself.
    fn brute_force(f: &[Quaternion], n: usize) -> Vec<Quaternion> {
        let mut out = vec![Quaternion::ZERO; n * n];
        for r in 0..n {
            for s in 0..n {
                let mut acc = Quaternion::ZERO;
                for q in 0..n {
                    for b in 0..n {
                        let ti = 2.0 * PI * (r * q) as f64 / n as f64;
                        let tj = 2.0 * PI * (s * b) as f64 / n as f64;
                        let ki = Quaternion::exp_unit(Quaternion::I, -ti);
                        let kj = Quaternion::exp_unit(Quaternion::J, -tj);
                        acc += ki * f[q * n + b] * kj;
                    }
                }
                out[r * n + s] = acc * (1.0 / n as f64);
            }
        }
        out
    }

    #[test]
    fn kernel_helpers_match_hamilton_product() {
        let q = Quaternion::new(0.3, -1.1, 0.7, 2.0);
        let t: f64 = 0.9;
        let li = Quaternion::exp_unit(Quaternion::I, -t) * q;
        let rj = q * Quaternion::exp_unit(Quaternion::J, -t);
        assert!(left_exp_i(t.cos(), t.sin(), q).approx_eq(&li, 1e-15));
        assert!(right_exp_j(t.cos(), t.sin(), q).approx_eq(&rj, 1e-15));
    }

    #[test]
    fn matches_double_sum() {
        for n in [2, 3, 5] {
            let f = random_image(n, n as u64);
            let fast = Qdft2D::new(n).unwrap().forward(&f).unwrap();
            let slow = brute_force(&f, n);
            for (a, b) in fast.iter().zip(&slow) {
                assert!(a.approx_eq(b, 1e-12));
            }
        }
    }

    #[test]
    fn constant_image_concentrates_at_dc() {
        let n = 4;
        let c = Quaternion::new(0.5, 1.0, -2.0, 0.25);
        let spec = Qdft2D::new(n).unwrap().forward(&vec![c; n * n]).unwrap();
        assert!(spec[0].approx_eq(&(c * n as f64), 1e-14));
        for v in &spec[1..] {
            assert!(v.modulus() < 1e-14);
        }
    }

    #[test]
    fn delta_gives_flat_spectrum() {
        let n = 8;
        let mut f = vec![Quaternion::ZERO; n * n];
        f[0] = Quaternion::ONE;
        let spec = Qdft2D::new(n).unwrap().forward(&f).unwrap();
        for v in spec {
            assert!(v.approx_eq(&Quaternion::from_real(1.0 / n as f64), 1e-15));
        }
    }

    #[test]
    fn round_trip_and_parseval() {
        for n in [2, 4, 8, 16] {
            let plan = Qdft2D::new(n).unwrap();
            let f = random_image(n, 100 + n as u64);
            let spec = plan.forward(&f).unwrap();
            let back = plan.inverse(&spec).unwrap();
            let err: Vec<Quaternion> = back.iter().zip(&f).map(|(a, b)| *a - *b).collect();
            assert!(norm(&err) / norm(&f) < 1e-10);
            assert!((norm(&spec) - norm(&f)).abs() / norm(&f) < 1e-10);
        }
    }

    #[test]
    fn row_functional_examples() {
        let n = 8;
        let plan = Qdft2D::new(n).unwrap();
        let f = random_image(n, 7);
        let sum = f.iter().fold(Quaternion::ZERO, |a, &b| a + b) * (1.0 / n as f64);
        assert!(plan
            .row(0, 0)
            .unwrap()
            .apply(&f)
            .unwrap()
            .approx_eq(&sum, 1e-12));

        let (q0, b0, r, s) = (3, 5, 2, 7);
        let mut delta = vec![Quaternion::ZERO; n * n];
        delta[q0 * n + b0] = Quaternion::ONE;
        let expect = Quaternion::exp_unit(Quaternion::I, -2.0 * PI * (r * q0) as f64 / n as f64)
            * Quaternion::exp_unit(Quaternion::J, -2.0 * PI * (s * b0) as f64 / n as f64)
            * (1.0 / n as f64);
        assert!(plan
            .row(r, s)
            .unwrap()
            .apply(&delta)
            .unwrap()
            .approx_eq(&expect, 1e-14));

        assert!(matches!(plan.row(n, 0), Err(HprError::Index { .. })));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let plan = Qdft2D::new(4).unwrap();
        assert!(plan.forward(&[Quaternion::ONE; 15]).is_err());
        assert!(Qdft2D::new(0).is_err());
    }
}
