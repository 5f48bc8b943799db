use std::f64::consts::FRAC_PI_2;

use crate::algebra::Quaternion;
use crate::error::{check_len, HprError, Result};

/// Mother wavelet sampled on a `rows x cols` grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MotherWavelet {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Quaternion>,
}

impl MotherWavelet {
    pub fn new(rows: usize, cols: usize, data: Vec<Quaternion>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(HprError::InvalidParameter("empty mother wavelet".into()));
        }
        check_len(rows * cols, data.len())?;
        Ok(MotherWavelet { rows, cols, data })
    }

    /// Quaternion Haar: `(LL + LH i + HL j + HH k) / 2` on a 2x2 grid, so every
    /// sample has unit modulus.
    pub fn haar() -> Self {
        let ll = [1.0, 1.0, 1.0, 1.0];
        let lh = [1.0, 1.0, -1.0, -1.0];
        let hl = [1.0, -1.0, 1.0, -1.0];
        let hh = [1.0, -1.0, -1.0, 1.0];
        let data = (0..4)
            .map(|p| Quaternion::new(ll[p], lh[p], hl[p], hh[p]) * 0.5)
            .collect();
        MotherWavelet {
            rows: 2,
            cols: 2,
            data,
        }
    }

    /// Discrete delta, which makes every unit-scale member the identity.
    pub fn delta() -> Self {
        MotherWavelet {
            rows: 1,
            cols: 1,
            data: vec![Quaternion::ONE],
        }
    }

    fn sample(&self, r: i64, c: i64) -> Option<Quaternion> {
        if r < 0 || c < 0 || r >= self.rows as i64 || c >= self.cols as i64 {
            return None;
        }
        Some(self.data[r as usize * self.cols + c as usize])
    }
}

/// One family member `psi^k(x) = psi(R_{-theta} x / a) / a`, kept as its
/// nonzero taps `(dr, dc, value)` with signed offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletMember {
    pub scale: f64,
    pub angle: f64,
    pub taps: Vec<(i64, i64, Quaternion)>,
}

impl WaveletMember {
    fn build(mother: &MotherWavelet, scale: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        // Exact permutation for multiples of pi/2, nearest neighbour otherwise.
        let quarter = angle / FRAC_PI_2;
        let exact = (quarter - quarter.round()).abs() < 1e-12;
        let (c, s) = if exact {
            (c.round(), s.round())
        } else {
            (c, s)
        };
        let reach = (scale * (mother.rows.max(mother.cols) as f64) * 1.5).ceil() as i64 + 1;
        let mut taps = Vec::new();
        for u in -reach..=reach {
            for v in -reach..=reach {
                // R_{-theta} applied to (u, v)
                let ru = c * u as f64 + s * v as f64;
                let rv = -s * u as f64 + c * v as f64;
                let (ru, rv) = if exact {
                    (ru, rv)
                } else {
                    (ru.round(), rv.round())
                };
                let su = (ru / scale).floor() as i64;
                let sv = (rv / scale).floor() as i64;
                if let Some(val) = mother.sample(su, sv) {
                    if val != Quaternion::ZERO {
                        taps.push((u, v, val * (1.0 / scale)));
                    }
                }
            }
        }
        WaveletMember { scale, angle, taps }
    }

    /// Bounding-box extent `(rows, cols)` of the taps.
    pub fn extent(&self) -> (usize, usize) {
        let span = |f: fn(&(i64, i64, Quaternion)) -> i64| {
            let lo = self.taps.iter().map(f).min().unwrap_or(0);
            let hi = self.taps.iter().map(f).max().unwrap_or(-1);
            (hi - lo + 1).max(0) as usize
        };
        (span(|t| t.0), span(|t| t.1))
    }
}

/// A bank of scaled and rotated copies of one mother wavelet, applied by
/// circular 2-D convolution on an `N x N` grid:
///
/// `F_k(r, s) = sum_{p,q} f(p, q) psi^k(r - p, s - q)`, indices mod `N`,
/// with the signal on the left of each product.
#[derive(Debug, Clone)]
pub struct QwtBank {
    n: usize,
    mother: MotherWavelet,
    members: Vec<WaveletMember>,
}

impl QwtBank {
    pub fn new(n: usize, mother: MotherWavelet, params: &[(f64, f64)]) -> Result<Self> {
        if params.is_empty() {
            return Err(HprError::InvalidParameter("wavelet bank is empty".into()));
        }
        if n == 0 {
            return Err(HprError::InvalidParameter(
                "grid size must be positive".into(),
            ));
        }
        let mut members = Vec::with_capacity(params.len());
        for &(scale, angle) in params {
            if !(scale > 0.0) || !angle.is_finite() {
                return Err(HprError::InvalidParameter(format!(
                    "bad wavelet scale/angle ({scale}, {angle})"
                )));
            }
            let m = WaveletMember::build(&mother, scale, angle);
            let (er, ec) = m.extent();
            if er > n || ec > n {
                return Err(HprError::InvalidParameter(format!(
                    "wavelet support {er}x{ec} exceeds {n}x{n} grid"
                )));
            }
            members.push(m);
        }
        Ok(QwtBank { n, mother, members })
    }

    /// Quaternion Haar at scales {1, 2} and angles {0, pi/2}.
    pub fn default_haar(n: usize) -> Result<Self> {
        let params = [(1.0, 0.0), (1.0, FRAC_PI_2), (2.0, 0.0), (2.0, FRAC_PI_2)];
        Self::new(n, MotherWavelet::haar(), &params)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn mother(&self) -> &MotherWavelet {
        &self.mother
    }

    pub fn members(&self) -> &[WaveletMember] {
        &self.members
    }

    fn wrap(&self, v: i64) -> usize {
        v.rem_euclid(self.n as i64) as usize
    }

    /// `psi^k` laid out densely on the `N x N` torus.
    pub fn dense_member(&self, k: usize) -> Vec<Quaternion> {
        let n = self.n;
        let mut out = vec![Quaternion::ZERO; n * n];
        for &(u, v, val) in &self.members[k].taps {
            out[self.wrap(u) * n + self.wrap(v)] += val;
        }
        out
    }

    /// One output array per member.
    pub fn apply(&self, f: &[Quaternion]) -> Result<Vec<Vec<Quaternion>>> {
        let n = self.n;
        check_len(n * n, f.len())?;
        Ok(self
            .members
            .iter()
            .map(|m| {
                let mut out = vec![Quaternion::ZERO; n * n];
                for r in 0..n {
                    for s in 0..n {
                        let mut acc = Quaternion::ZERO;
                        for &(u, v, val) in &m.taps {
                            let p = self.wrap(r as i64 - u);
                            let q = self.wrap(s as i64 - v);
                            acc += f[p * n + q] * val;
                        }
                        out[r * n + s] = acc;
                    }
                }
                out
            })
            .collect())
    }

    /// Taps of output `(k, r, s)` as `(pixel, right factor)`:
    /// `F_k(r, s) = sum f[pixel] * factor`.
    pub fn row(&self, k: usize, r: usize, s: usize) -> Result<Vec<(usize, Quaternion)>> {
        let n = self.n;
        if k >= self.len() {
            return Err(HprError::Index {
                index: k,
                len: self.len(),
            });
        }
        for idx in [r, s] {
            if idx >= n {
                return Err(HprError::Index { index: idx, len: n });
            }
        }
        let mut taps: Vec<(usize, Quaternion)> = Vec::new();
        for &(u, v, val) in &self.members[k].taps {
            let pix = self.wrap(r as i64 - u) * n + self.wrap(s as i64 - v);
            match taps.iter_mut().find(|t| t.0 == pix) {
                Some(t) => t.1 += val,
                None => taps.push((pix, val)),
            }
        }
        Ok(taps)
    }
}

/// Convenience wrapper for [`QwtBank::apply`].
pub fn qwt(f: &[Quaternion], bank: &QwtBank) -> Result<Vec<Vec<Quaternion>>> {
    bank.apply(f)
}
