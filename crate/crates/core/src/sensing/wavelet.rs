use super::{SensingModel, SensingRow};
use crate::algebra::{Hypercomplex, Quaternion};
use crate::error::{check_len, HprError, Result};
use crate::transforms::QwtBank;

/// Wavelet-bank magnitude model: row `l` is member `l / n`, pixel `l % n`,
/// so `m = L n` with `n = N^2`.
#[derive(Debug, Clone)]
pub struct WaveletModel {
    bank: QwtBank,
}

impl WaveletModel {
    pub fn new(bank: QwtBank) -> Self {
        WaveletModel { bank }
    }

    pub fn bank(&self) -> &QwtBank {
        &self.bank
    }
}

impl SensingModel for WaveletModel {
    type Scalar = Quaternion;

    fn m(&self) -> usize {
        self.bank.len() * self.n()
    }

    fn n(&self) -> usize {
        self.bank.size() * self.bank.size()
    }

    fn forward(&self, x: &[Quaternion]) -> Result<Vec<Quaternion>> {
        Ok(self.bank.apply(x)?.concat())
    }

    fn adjoint(&self, u: &[Quaternion]) -> Result<Vec<Quaternion>> {
        check_len(self.m(), u.len())?;
        let side = self.bank.size() as i64;
        let n = self.n();
        let mut out = vec![Quaternion::ZERO; n];
        for (k, member) in self.bank.members().iter().enumerate() {
            for r in 0..side {
                for s in 0..side {
                    let v = u[k * n + (r * side + s) as usize];
                    for &(du, dv, val) in &member.taps {
                        let p = (r - du).rem_euclid(side);
                        let q = (s - dv).rem_euclid(side);
                        out[(p * side + q) as usize] += v * val.conj();
                    }
                }
            }
        }
        Ok(out)
    }

    fn row(&self, l: usize) -> Result<SensingRow<Quaternion>> {
        if l >= self.m() {
            return Err(HprError::Index {
                index: l,
                len: self.m(),
            });
        }
        let (n, side) = (self.n(), self.bank.size());
        let (k, pix) = (l / n, l % n);
        Ok(SensingRow {
            terms: self
                .bank
                .row(k, pix / side, pix % side)?
                .into_iter()
                .map(|(p, w)| (p, Quaternion::one(), w))
                .collect(),
        })
    }
}
