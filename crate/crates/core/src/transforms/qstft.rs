use crate::algebra::Quaternion;
use crate::error::{check_len, HprError, Result};

use super::qdft::{left_exp_i, Twiddles};

/// Discrete quaternion STFT of a length-`N` signal with a length-`T` window
/// and hop `L`:
///
/// `Y(r, s) = f_s^* W_r x`, where `W_r` is the diagonal of the window
/// circularly shifted by `r L` (zero-padded to `N`), applied from the left,
/// and `f_s^*` is row `s` of the unitary 1-D QDFT with the `i` kernel.
/// There are `R = ceil((N + T - 1) / L)` sections.
#[derive(Debug, Clone)]
pub struct QstftPlan {
    window: Vec<Quaternion>,
    hop: usize,
    n: usize,
    sections: usize,
    tw: Twiddles,
}

impl QstftPlan {
    pub fn new(window: Vec<Quaternion>, hop: usize, n: usize) -> Result<Self> {
        if window.is_empty() || hop == 0 || n == 0 {
            return Err(HprError::InvalidParameter(
                "window, hop and signal length must be nonzero".into(),
            ));
        }
        if window.len() > n {
            return Err(HprError::InvalidParameter(format!(
                "window length {} exceeds signal length {n}",
                window.len()
            )));
        }
        let sections = (n + window.len() - 1).div_ceil(hop);
        Ok(QstftPlan {
            window,
            hop,
            n,
            sections,
            tw: Twiddles::new(n),
        })
    }

    /// Rectangular window of ones.
    pub fn rectangular(len: usize, hop: usize, n: usize) -> Result<Self> {
        Self::new(vec![Quaternion::ONE; len], hop, n)
    }

    pub fn signal_len(&self) -> usize {
        self.n
    }

    pub fn sections(&self) -> usize {
        self.sections
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn window(&self) -> &[Quaternion] {
        &self.window
    }

    /// Diagonal of `W_r`: entry `q` is `w[(q - r L) mod N]` (zero past the window).
    pub fn shifted_window(&self, r: usize) -> Vec<Quaternion> {
        let shift = (r * self.hop) % self.n;
        (0..self.n)
            .map(|q| {
                let t = (q + self.n - shift) % self.n;
                self.window.get(t).copied().unwrap_or(Quaternion::ZERO)
            })
            .collect()
    }

    /// `R x N` output, row-major by section.
    pub fn apply(&self, x: &[Quaternion]) -> Result<Vec<Quaternion>> {
        check_len(self.n, x.len())?;
        let mut out = Vec::with_capacity(self.sections * self.n);
        let scale = 1.0 / (self.n as f64).sqrt();
        for r in 0..self.sections {
            let windowed: Vec<Quaternion> = self
                .shifted_window(r)
                .iter()
                .zip(x)
                .map(|(&w, &v)| w * v)
                .collect();
            for s in 0..self.n {
                let acc = windowed
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v != Quaternion::ZERO)
                    .fold(Quaternion::ZERO, |acc, (q, &v)| {
                        let (c, sn) = self.tw.at(s, q);
                        acc + left_exp_i(c, sn, v)
                    });
                out.push(acc * scale);
            }
        }
        Ok(out)
    }

    /// Left factor acting on `x_q` in output `(r, s)`: `e^{-i 2 pi s q / N} w_r[q] / sqrt(N)`.
    pub fn factor(&self, r: usize, s: usize, q: usize) -> Quaternion {
        let shift = (r * self.hop) % self.n;
        let t = (q + self.n - shift) % self.n;
        match self.window.get(t) {
            Some(&w) => {
                let (c, sn) = self.tw.at(s, q);
                left_exp_i(c, sn, w) * (1.0 / (self.n as f64).sqrt())
            }
            None => Quaternion::ZERO,
        }
    }
}

/// Convenience wrapper for [`QstftPlan::apply`].
pub fn qstft(x: &[Quaternion], plan: &QstftPlan) -> Result<Vec<Quaternion>> {
    plan.apply(x)
}
